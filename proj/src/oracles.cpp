#include "rollsim/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rollsim/quadrature.hpp"

namespace rollsim {
namespace {

constexpr double kForever = std::numeric_limits<double>::infinity();

// Break points of the past, mapped to s = −τ >= 0.
std::vector<double> past_breaks(const PastData& past) {
  std::vector<double> out;
  for (double tau : past.tau()) out.push_back(-tau);
  return out;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

double quadratic_final_position(double beta, double zeta, const PastData& past) {
  if (!(beta >= 0.0)) throw std::invalid_argument("quadratic_final_position: beta must be >= 0");
  if (!(zeta > 0.0)) throw std::invalid_argument("quadratic_final_position: zeta must be > 0");
  const double horizon = 80.0 / zeta;
  const double weighted = quad::gauss_panels([&](double s) { return std::exp(-zeta * s) * past(-s); }, 0.0, horizon,
                                             past_breaks(past), horizon / 512.0);
  return (zeta * zeta * past(0.0) + beta * zeta * weighted) / (zeta * zeta + beta);
}

double p_infinity_profile(const Kernel& kernel, const PastData& past, double a) {
  if (a < 0.0) throw std::invalid_argument("p_infinity_profile: a must be >= 0");
  const std::vector<double> pb = past_breaks(past);
  auto cumulative = [&](double x) {
    return quad::gauss_panels([&](double s) { return past.initial_stretch(s); }, 0.0, x, pb, 1.0);
  };
  const double end = kernel.support_end(kForever);
  std::vector<double> cuts = kernel.profile_breaks();
  cuts.insert(cuts.end(), pb.begin(), pb.end());
  const double panel = end / 128.0;
  const double coupling = quad::gauss_panels(
      [&](double s) { return kernel(s, kForever) * cumulative(s); }, 0.0, end, cuts, panel);
  const double first = quad::gauss_panels([&](double s) { return kernel(s, kForever) * s; }, 0.0, end, cuts, panel);
  return cumulative(a) - a * coupling / (1.0 + first);
}

PlasticProfile::PlasticProfile(double v_inf, Kernel profile, double z0)
    : v_inf_(v_inf), profile_(std::move(profile)), z0_(z0), t1_(0.0) {
  const double mass = profile_.total_mass();
  const double target = std::abs(v_inf_);
  if (target > mass)
    throw std::invalid_argument("plastic_trajectory: |v_inf| > mu_inf is the kinematic regime; use kinematic_trajectory");
  if (target == 0.0) return;
  if (target == mass) {
    t1_ = kForever;
    return;
  }
  double hi = 1.0;
  while (profile_.mu(hi) < target) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (profile_.mu(mid) < target ? lo : hi) = mid;
  }
  t1_ = 0.5 * (lo + hi);
}

double PlasticProfile::operator()(double t) const {
  const double s = std::clamp(t, 0.0, t1_);
  if (s == 0.0) return z0_;
  return z0_ + sign(v_inf_) * (std::abs(v_inf_) * s - integrated_mu(profile_, s));
}

double PlasticProfile::velocity(double t) const {
  if (t >= t1_) return 0.0;
  return sign(v_inf_) * std::max(0.0, std::abs(v_inf_) - profile_.mu(t));
}

PlasticProfile plastic_trajectory(double v_inf, const Kernel& profile, double z0) {
  return PlasticProfile(v_inf, profile, z0);
}

double integrated_mu(const Kernel& profile, double t) {
  if (!(t > 0.0)) return 0.0;
  return quad::gauss_panels([&](double s) { return profile.mu(s); }, 0.0, t, profile.profile_breaks(), 0.5);
}

double kinematic_trajectory(double v_inf, const Kernel& profile, double z0, double t) {
  if (!(std::abs(v_inf) > profile.total_mass()))
    throw std::invalid_argument("kinematic_trajectory: |v_inf| <= mu_inf is the plastic regime");
  return z0 + v_inf * t - sign(v_inf) * integrated_mu(profile, t);
}

double kinematic_velocity(double v_inf, const Kernel& profile, double t) {
  if (!(std::abs(v_inf) > profile.total_mass()))
    throw std::invalid_argument("kinematic_velocity: |v_inf| <= mu_inf is the plastic regime");
  return v_inf - sign(v_inf) * profile.mu(t);
}

double gamma_abs(double v_inf, double mu_inf) {
  if (!(mu_inf >= 0.0)) throw std::invalid_argument("gamma_abs: mu_inf must be >= 0");
  if (std::abs(v_inf) <= mu_inf) return 0.0;
  return v_inf - sign(v_inf) * mu_inf;
}

}  // namespace rollsim
