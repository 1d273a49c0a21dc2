#include "rollsim/solver_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rollsim/errors.hpp"
#include "rollsim/quadrature.hpp"

namespace rollsim {
namespace {

// Panel edges in a: where a·|w| crosses a knot of ψ, plus the kernel's own breaks.
std::vector<double> age_cuts(const Potential& psi, const Kernel& kernel, std::initializer_list<double> ws) {
  std::vector<double> cuts = kernel.profile_breaks();
  const std::vector<double> knots = psi.knots();
  for (double w : ws) {
    if (w == 0.0) continue;
    for (double k : knots)
      if (k > 0.0) cuts.push_back(k / std::abs(w));
  }
  return cuts;
}

double panel_width(const Kernel& kernel, double end) { return std::max(end, kernel.a_max()) / 256.0; }

}  // namespace

SubdiffInterval limit_force(const Potential& psi, const Kernel& kernel, double w, double t) {
  if (w == 0.0) {
    const SubdiffInterval s = psi.subdifferential(0.0);
    const double m0 = kernel.moment(t, 0);
    return {s.lo * m0, s.hi * m0};
  }
  const double end = kernel.support_end(t);
  const std::vector<double> cuts = age_cuts(psi, kernel, {w});
  const double integral = quad::gauss_panels(
      [&](double a) {
        const double rho = kernel(a, t);
        return rho == 0.0 ? 0.0 : psi.derivative(a * w) * rho;
      },
      0.0, end, cuts, panel_width(kernel, end));
  return {w + integral, w + integral};
}

double limit_velocity(const Potential& psi, const Kernel& kernel, double v, double t) {
  if (!std::isfinite(v)) throw std::invalid_argument("limit_velocity: v must be finite");
  const SubdiffInterval at_zero = limit_force(psi, kernel, 0.0, t);
  if (at_zero.contains(v)) return 0.0;
  double lo = -std::abs(v) - 1.0;
  double hi = std::abs(v) + 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const SubdiffInterval g = limit_force(psi, kernel, mid, t);
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) throw NumericalError("limit_velocity: non-finite force");
    if (g.lo > v)
      hi = mid;
    else if (g.hi < v)
      lo = mid;
    else
      return mid;
  }
  return 0.5 * (lo + hi);
}

double limit_energy_increment(const Potential& psi, const Kernel& kernel, double v, double t, double w, double y) {
  const double end = kernel.support_end(t);
  const std::vector<double> cuts = age_cuts(psi, kernel, {w, y});
  const double memory = quad::gauss_panels(
      [&](double a) {
        const double rho = kernel(a, t);
        if (rho == 0.0) return 0.0;
        // a·w and a·y are rounded separately; put their rounding errors back to first order.
        const double x = a * w;
        const double z = a * y;
        const double dx = std::fma(a, w, -x);
        const double dz = std::fma(a, y, -z);
        return (psi.increment(x, z) + psi.derivative(x) * dx - psi.derivative(z) * dz) / a * rho;
      },
      0.0, end, cuts, panel_width(kernel, end));
  return 0.5 * (w - y) * (w + y) - v * (w - y) + memory;
}

double limit_velocity_by_minimization(const Potential& psi, const Kernel& kernel, double v, double t) {
  if (v == 0.0) return 0.0;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = -std::abs(v);
  double b = std::abs(v);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  while (b - a > 1e-12) {
    if (limit_energy_increment(psi, kernel, v, t, c, d) < 0.0) {
      b = d;
      d = c;
      c = b - ratio * (b - a);
    } else {
      a = c;
      c = d;
      d = a + ratio * (b - a);
    }
  }
  return 0.5 * (a + b);
}

Trajectory integrate_limit(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                           double T, double dt) {
  if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("integrate_limit: T and dt must be > 0");
  const double steps_real = std::round(T / dt);
  if (std::abs(steps_real * dt - T) > 1e-9 * T)
    throw std::invalid_argument("integrate_limit: T must be a whole number of steps dt");
  const auto steps = static_cast<std::size_t>(steps_real);
  Trajectory traj(past, dt, 0.0);
  traj.reserve(steps + 1);
  const double z0 = traj[0];
  if (v.is_constant() && !kernel.time_dependent()) {
    const double w = limit_velocity(psi, kernel, v(0.0), 0.0);
    for (std::size_t n = 1; n <= steps; ++n) traj.append(z0 + w * static_cast<double>(n) * dt);
    return traj;
  }
  double z = z0;
  double w_prev = limit_velocity(psi, kernel, v(0.0), 0.0);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const double w = limit_velocity(psi, kernel, v(t), t);
    z += 0.5 * dt * (w_prev + w);
    w_prev = w;
    traj.append(z);
  }
  return traj;
}

double asymptotic_velocity(const LimitData& data) {
  return limit_velocity(data.psi, data.rho_inf, data.v_inf, std::numeric_limits<double>::infinity());
}

}  // namespace rollsim
