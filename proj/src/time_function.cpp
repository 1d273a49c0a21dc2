#include "rollsim/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rollsim/quadrature.hpp"

namespace rollsim {

TimeFunction TimeFunction::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("time function: constant must be finite");
  TimeFunction f;
  f.kind_ = Kind::Constant;
  f.limit_ = value;
  return f;
}

TimeFunction TimeFunction::table(std::vector<double> t, std::vector<double> values) {
  if (t.empty() || t.size() != values.size())
    throw std::invalid_argument("time function: table needs matching, nonempty t and values");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("time function: table entries must be finite");
    if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("time function: table times must increase");
  }
  TimeFunction f;
  f.kind_ = Kind::Table;
  f.limit_ = values.back();
  f.t_ = std::move(t);
  f.values_ = std::move(values);
  return f;
}

TimeFunction TimeFunction::relaxing(double limit, double amplitude, double rate) {
  if (!std::isfinite(limit) || !std::isfinite(amplitude) || !(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("time function: relaxing needs finite limit, amplitude and rate > 0");
  TimeFunction f;
  f.kind_ = Kind::Relaxing;
  f.limit_ = limit;
  f.amplitude_ = amplitude;
  f.rate_ = rate;
  return f;
}

double TimeFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant: return limit_;
    case Kind::Relaxing: return limit_ + amplitude_ * std::exp(-rate_ * t);
    case Kind::Table: break;
  }
  if (t <= t_.front()) return values_.front();
  if (t >= t_.back()) return values_.back();
  const auto i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin()) - 1;
  const double s = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

bool TimeFunction::is_constant() const {
  if (kind_ == Kind::Constant) return true;
  if (kind_ == Kind::Relaxing) return amplitude_ == 0.0;
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

double TimeFunction::limit() const { return limit_; }

double TimeFunction::sup_abs(double T) const {
  double s = std::max(std::abs((*this)(0.0)), std::abs((*this)(T)));
  if (kind_ == Kind::Table)
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (t_[i] > 0.0 && t_[i] < T) s = std::max(s, std::abs(values_[i]));
  return s;
}

double TimeFunction::integral_abs(double T) const {
  if (!(T > 0.0)) return 0.0;
  if (kind_ == Kind::Constant) return std::abs(limit_) * T;
  std::vector<double> cuts = t_;
  if (kind_ == Kind::Table) {
    for (std::size_t i = 0; i + 1 < t_.size(); ++i)
      if (values_[i] * values_[i + 1] < 0.0)
        cuts.push_back(t_[i] + (t_[i + 1] - t_[i]) * values_[i] / (values_[i] - values_[i + 1]));
  } else if (limit_ * amplitude_ < 0.0 && std::abs(amplitude_) > std::abs(limit_)) {
    cuts.push_back(std::log(-amplitude_ / limit_) / rate_);
  }
  return quad::gauss_panels([&](double t) { return std::abs((*this)(t)); }, 0.0, T, cuts, T / 64.0);
}

}  // namespace rollsim
