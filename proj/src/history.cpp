#include "rollsim/history.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rollsim {

PastData PastData::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("past: constant must be finite");
  PastData p;
  p.kind_ = Kind::Constant;
  p.intercept_ = value;
  return p;
}

PastData PastData::linear(double slope, double intercept) {
  if (!std::isfinite(slope) || !std::isfinite(intercept)) throw std::invalid_argument("past: linear needs finite slope and intercept");
  PastData p;
  p.kind_ = Kind::Linear;
  p.slope_ = slope;
  p.intercept_ = intercept;
  return p;
}

PastData PastData::tabulated(std::vector<double> tau, std::vector<double> values) {
  if (tau.empty() || tau.size() != values.size())
    throw std::invalid_argument("past: table needs matching, nonempty tau and values");
  if (tau.back() != 0.0) throw std::invalid_argument("past: table tau must end at 0");
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!std::isfinite(tau[i]) || !std::isfinite(values[i])) throw std::invalid_argument("past: table entries must be finite");
    if (i > 0 && !(tau[i] > tau[i - 1])) throw std::invalid_argument("past: table tau must increase");
  }
  PastData p;
  p.kind_ = Kind::Tabulated;
  p.tau_ = std::move(tau);
  p.values_ = std::move(values);
  return p;
}

double PastData::operator()(double tau) const {
  if (tau > 0.0) throw std::invalid_argument("past: evaluated at tau > 0");
  switch (kind_) {
    case Kind::Constant: return intercept_;
    case Kind::Linear: return slope_ * tau + intercept_;
    case Kind::Tabulated: break;
  }
  if (tau <= tau_.front()) return values_.front();
  const auto i = static_cast<std::size_t>(std::upper_bound(tau_.begin(), tau_.end(), tau) - tau_.begin()) - 1;
  if (i + 1 >= tau_.size()) return values_.back();
  const double s = (tau - tau_[i]) / (tau_[i + 1] - tau_[i]);
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

double PastData::initial_stretch(double a) const {
  if (a < 0.0) throw std::invalid_argument("past: initial_stretch needs a >= 0");
  if (kind_ == Kind::Linear) return slope_ * a;
  return (*this)(0.0) - (*this)(-a);
}

double PastData::lipschitz() const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Linear: return std::abs(slope_);
    case Kind::Tabulated: break;
  }
  double l = 0.0;
  for (std::size_t i = 0; i + 1 < tau_.size(); ++i)
    l = std::max(l, std::abs(values_[i + 1] - values_[i]) / (tau_[i + 1] - tau_[i]));
  return l;
}

double PastData::bound() const {
  switch (kind_) {
    case Kind::Constant: return std::abs(intercept_);
    case Kind::Linear: return slope_ == 0.0 ? std::abs(intercept_) : std::numeric_limits<double>::infinity();
    case Kind::Tabulated: break;
  }
  double b = 0.0;
  for (double v : values_) b = std::max(b, std::abs(v));
  return b;
}

Trajectory::Trajectory(PastData past, double dt, double eps) : past_(std::move(past)), dt_(dt), eps_(eps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("trajectory: dt must be > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("trajectory: eps must be >= 0");
  values_.push_back(past_(0.0));
}

double Trajectory::at(double s) const {
  if (s <= 0.0) return past_(s);
  const double r = s / dt_;
  const double last = static_cast<double>(steps());
  if (r > last * (1.0 + 1e-12) + 1e-9) throw std::out_of_range("trajectory: sample beyond the last computed node");
  const double k = std::round(r);
  if (std::abs(r - k) <= 1e-9 * std::max(1.0, r)) return values_[static_cast<std::size_t>(std::min(k, last))];
  const auto i = std::min(static_cast<std::size_t>(r), steps() - 1);
  const double w = r - static_cast<double>(i);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double Trajectory::sample_delayed(double t, double lag) const {
  if (lag < 0.0) throw std::invalid_argument("trajectory: lag must be >= 0");
  if (t / dt_ > static_cast<double>(steps()) * (1.0 + 1e-12) + 1e-9)
    throw std::out_of_range("trajectory: t beyond the last computed node");
  if (lag == 0.0) return at(t);
  return at(t - lag);
}

double Trajectory::velocity(std::size_t n) const {
  if (values_.size() < 2) return 0.0;
  if (n == 0) return (values_[1] - values_[0]) / dt_;
  if (n + 1 >= values_.size()) return (values_[n] - values_[n - 1]) / dt_;
  return (values_[n + 1] - values_[n - 1]) / (2.0 * dt_);
}

void Trajectory::write_csv(std::ostream& os, int precision) const {
  const auto old = os.precision(precision);
  os << "t,z,zdot\n";
  for (std::size_t n = 0; n < values_.size(); ++n) os << time(n) << ',' << values_[n] << ',' << velocity(n) << '\n';
  os.precision(old);
}

}  // namespace rollsim
