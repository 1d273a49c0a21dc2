#include "rollsim/solver_mm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "memory_grid.hpp"
#include "rollsim/errors.hpp"
#include "rollsim/simd/force_kernels.hpp"

namespace rollsim {

double StepEnergy::energy(double w) const {
  double mem = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j)
    if (weights[j] != 0.0) mem += weights[j] * psi->value((w - anchors[j]) / eps);
  const double d = w - previous;
  return d * d / (2.0 * dt) + eps * weight_scale * mem - drive * w;
}

double StepEnergy::energy_increment(double x, double y) const {
  double mem = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j)
    if (weights[j] != 0.0) mem += weights[j] * psi->increment((x - anchors[j]) / eps, (y - anchors[j]) / eps);
  const double prox = (x - y) * ((x - previous) + (y - previous)) / (2.0 * dt);
  return prox + eps * weight_scale * mem - drive * (x - y);
}

SubdiffInterval StepEnergy::subgradient(double w) const {
  const simd::KernelTable& k = kernels ? *kernels : simd::active_kernels();
  const SubdiffInterval mem =
      weight_scale * detail::weighted_subgradient(*psi, k, weights.data(), anchors.data(), weights.size(), w, eps);
  const double base = (w - previous) / dt - drive;
  return {base + mem.lo, base + mem.hi};
}

double minimize_step(const StepEnergy& e) {
  if (e.psi == nullptr) throw std::invalid_argument("minimize_step: no potential");
  if (!(e.dt > 0.0) || !(e.eps > 0.0)) throw std::invalid_argument("minimize_step: dt and eps must be > 0");
  if (e.weights.size() != e.anchors.size()) throw std::invalid_argument("minimize_step: weights/anchors size mismatch");

  const double z = e.previous;
  const SubdiffInterval g = e.subgradient(z);
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) throw NumericalError("minimize_step: non-finite subgradient");
  if (g.contains(0.0)) return z;

  // The subgradient grows at least like (w − z)/dt, which bounds the minimizer.
  double lo = z;
  double hi = z;
  if (g.lo > 0.0)
    lo = z - e.dt * g.lo;
  else
    hi = z - e.dt * g.hi;
  const double width = std::max(1e-12, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z));
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const SubdiffInterval s = e.subgradient(mid);
    if (s.lo > 0.0)
      hi = mid;
    else if (s.hi < 0.0)
      lo = mid;
    else
      return mid;
  }
  return 0.5 * (lo + hi);
}

Trajectory solve_mm(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                    const SolverConfig& cfg) {
  const std::size_t steps = cfg.steps();
  const double dt = cfg.dt;
  const double eps = cfg.eps;
  const simd::KernelTable& k = cfg.kernels ? *cfg.kernels : simd::active_kernels();

  const detail::AgeGrid grid(kernel, dt / eps, false);
  detail::LineBuffer line(past, dt, grid.count, steps);
  Trajectory traj(past, dt, eps);
  traj.reserve(steps + 1);

  StepEnergy e;
  e.psi = &psi;
  e.dt = dt;
  e.eps = eps;
  e.kernels = &k;
  double z = traj[0];
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const auto b = detail::block(grid, line, static_cast<std::ptrdiff_t>(n) - 1, 0, grid.active(kernel, t));
    e.previous = z;
    e.drive = v(t);
    e.weights = {b.w, b.n};
    e.anchors = {b.y, b.n};
    e.weight_scale = kernel.modulation(t);
    z = minimize_step(e);
    if (!std::isfinite(z)) throw NumericalError("solve_mm: non-finite state at t = " + std::to_string(t));
    line.push(z);
    traj.append(z);
  }
  return traj;
}

StepEnergy MmStep::energy(const Potential& psi) const {
  StepEnergy e;
  e.psi = &psi;
  e.previous = previous;
  e.dt = dt;
  e.drive = drive;
  e.eps = eps;
  e.weights = weights;
  e.anchors = anchors;
  return e;
}

MmStep reconstruct_mm_step(const Kernel& kernel, const TimeFunction& v, const Trajectory& traj, std::size_t n) {
  if (n == 0 || n > traj.steps()) throw std::out_of_range("reconstruct_mm_step: step index out of range");
  const double dt = traj.dt();
  const double eps = traj.eps();
  const double t = static_cast<double>(n) * dt;
  const detail::AgeGrid grid(kernel, dt / eps, false);
  const std::size_t active = grid.active(kernel, t);
  MmStep s{{}, {}, traj[n - 1], v(t), dt, eps};
  const double m = kernel.modulation(t);
  for (std::size_t j = 0; j < active; ++j) {
    s.weights.push_back(m * grid.rev[grid.count - 1 - j]);
    const auto k = static_cast<std::ptrdiff_t>(n) - 1 - static_cast<std::ptrdiff_t>(j);
    s.anchors.push_back(k >= 0 ? traj[static_cast<std::size_t>(k)] : traj.past()(static_cast<double>(k) * dt));
  }
  return s;
}

}  // namespace rollsim
