#include "rollsim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace rollsim {
namespace {

void check_exponential(double beta, double zeta, std::optional<double> a_max) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("kernel: beta must be >= 0");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw std::invalid_argument("kernel: zeta must be > 0");
  if (a_max && (!(*a_max > 0.0) || !std::isfinite(*a_max))) throw std::invalid_argument("kernel: a_max must be > 0");
}

double factorial(int p) { return p == 2 ? 2.0 : 1.0; }

}  // namespace

Kernel Kernel::exponential(double beta, double zeta, std::optional<double> a_max) {
  check_exponential(beta, zeta, a_max);
  Kernel k;
  k.kind_ = Kind::Exponential;
  k.beta_ = beta;
  k.zeta_ = zeta;
  k.a_max_ = a_max.value_or(40.0 / zeta);
  return k;
}

Kernel Kernel::truncated_exponential(double beta, double zeta, std::optional<double> a_max) {
  Kernel k = exponential(beta, zeta, a_max);
  k.kind_ = Kind::TruncatedExponential;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> a_grid, std::vector<double> values, std::optional<TimeFunction> modulation,
                         std::optional<double> a_max) {
  if (a_grid.size() < 2 || a_grid.size() != values.size())
    throw std::invalid_argument("kernel: table needs at least two (a, value) pairs of matching length");
  if (a_grid.front() != 0.0) throw std::invalid_argument("kernel: table a_grid must start at 0");
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (!std::isfinite(a_grid[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("kernel: table entries must be finite");
    if (values[i] < 0.0) throw std::invalid_argument("kernel: table values must be >= 0");
    if (i > 0 && !(a_grid[i] > a_grid[i - 1])) throw std::invalid_argument("kernel: table a_grid must increase");
  }
  if (modulation) {
    const auto& m = modulation->values();
    const bool negative = modulation->kind() == TimeFunction::Kind::Table
                              ? std::any_of(m.begin(), m.end(), [](double x) { return x < 0.0; })
                              : (*modulation)(0.0) < 0.0 || modulation->limit() < 0.0;
    if (negative) throw std::invalid_argument("kernel: modulation must be >= 0");
  }
  if (a_max && (!(*a_max > 0.0) || !std::isfinite(*a_max))) throw std::invalid_argument("kernel: a_max must be > 0");
  Kernel k;
  k.kind_ = Kind::Tabulated;
  k.a_max_ = a_max.value_or(a_grid.back());
  k.a_grid_ = std::move(a_grid);
  k.values_ = std::move(values);
  k.modulation_ = std::move(modulation);
  return k;
}

double Kernel::profile(double a) const {
  if (a < 0.0) throw std::invalid_argument("kernel: age must be >= 0");
  if (kind_ != Kind::Tabulated) return beta_ * std::exp(-zeta_ * a);
  if (a >= a_grid_.back()) return 0.0;
  const auto i = static_cast<std::size_t>(std::upper_bound(a_grid_.begin(), a_grid_.end(), a) - a_grid_.begin()) - 1;
  const double s = (a - a_grid_[i]) / (a_grid_[i + 1] - a_grid_[i]);
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

double Kernel::modulation(double t) const { return modulation_ ? (*modulation_)(t) : 1.0; }

double Kernel::operator()(double a, double t) const {
  if (a < 0.0) throw std::invalid_argument("kernel: age must be >= 0");
  if (a >= a_max_) return 0.0;
  if (kind_ == Kind::TruncatedExponential && a >= t) return 0.0;
  return profile(a) * modulation(t);
}

double Kernel::moment(double t, int p) const {
  if (p < 0 || p > 2) throw std::invalid_argument("kernel: moment order must be 0, 1 or 2");
  switch (kind_) {
    case Kind::Exponential: return beta_ * factorial(p) / std::pow(zeta_, p + 1);
    case Kind::TruncatedExponential:
      if (!(t > 0.0)) return 0.0;
      if (std::isinf(t)) return beta_ * factorial(p) / std::pow(zeta_, p + 1);
      return beta_ / std::pow(zeta_, p + 1) * boost::math::tgamma_lower(p + 1.0, zeta_ * t);
    case Kind::Tabulated: break;
  }
  // Trapezoid on the table nodes, clipped at a_max.
  auto f = [&](double a) { return std::pow(a, p) * profile(a); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < a_grid_.size(); ++i) {
    const double lo = a_grid_[i];
    const double hi = std::min(a_grid_[i + 1], a_max_);
    if (hi <= lo) break;
    const double f_hi = hi < a_grid_[i + 1] ? f(hi) : std::pow(hi, p) * values_[i + 1];
    sum += 0.5 * (hi - lo) * (f(lo) + f_hi);
  }
  return sum * modulation(t);
}

double Kernel::mu(double t) const {
  if (modulation_ && !modulation_->is_constant())
    throw std::invalid_argument("kernel: mu(t) needs a time-independent profile");
  if (!(t > 0.0)) return 0.0;
  if (kind_ != Kind::Tabulated) {
    if (std::isinf(t)) return beta_ / zeta_;
    return -beta_ / zeta_ * std::expm1(-zeta_ * t);
  }
  const double m = modulation(0.0);
  const double end = std::min({t, a_grid_.back(), a_max_});
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < a_grid_.size() && a_grid_[i] < end; ++i) {
    const double hi = std::min(a_grid_[i + 1], end);
    const double f_hi = hi == a_grid_[i + 1] ? values_[i + 1] : profile(hi);
    sum += 0.5 * (hi - a_grid_[i]) * (values_[i] + f_hi);
  }
  return sum * m;
}

double Kernel::total_mass() const { return mu(std::numeric_limits<double>::infinity()); }

bool Kernel::time_dependent() const {
  return kind_ == Kind::TruncatedExponential || (modulation_ && !modulation_->is_constant());
}

double Kernel::support_end(double t) const {
  double end = kind_ == Kind::Tabulated ? std::min(a_max_, a_grid_.back()) : a_max_;
  if (kind_ == Kind::TruncatedExponential) end = std::min(end, std::max(t, 0.0));
  return end;
}

std::vector<double> Kernel::profile_breaks() const {
  if (kind_ != Kind::Tabulated) return {};
  std::vector<double> out;
  for (double a : a_grid_)
    if (a > 0.0 && a < a_max_) out.push_back(a);
  return out;
}

std::optional<bool> Kernel::transport_nonincreasing() const {
  if (kind_ == Kind::Tabulated) return std::nullopt;
  return true;
}

}  // namespace rollsim
