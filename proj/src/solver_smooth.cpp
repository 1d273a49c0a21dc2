#include "rollsim/solver_smooth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memory_grid.hpp"
#include "rollsim/errors.hpp"
#include "rollsim/simd/force_kernels.hpp"

namespace rollsim {

double memory_force(const Potential& psi, const Kernel& kernel, const Trajectory& traj, double t, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("memory_force: eps must be > 0");
  const double da = traj.dt() / eps;
  const auto count = static_cast<std::size_t>(std::ceil(kernel.a_max() / da - 1e-9));
  const std::vector<double> jumps = psi.jump_points();
  const double z = traj.sample_delayed(t, 0.0);
  double sum = 0.0;
  for (std::size_t j = 1; j < count; ++j) {
    const double a = static_cast<double>(j) * da;
    const double rho = kernel(a, t);
    if (rho == 0.0) continue;
    const double u = (z - traj.sample_delayed(t, eps * a)) / eps;
    if (std::binary_search(jumps.begin(), jumps.end(), u)) throw BreakpointCollision(u, "memory_force");
    sum += rho * psi.derivative(u);
  }
  // The zero-age node has zero stretch and contributes ψ′(0)·ρ(0,t)·Δa/2 = 0.
  return sum * da;
}

Trajectory solve_smooth(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                        const SolverConfig& cfg) {
  if (!psi.smooth())
    throw std::invalid_argument("solve_smooth: psi' of '" + psi.name() +
                                "' is not Lipschitz; mollify it or use the mm solver");
  const std::size_t steps = cfg.steps();
  const double dt = cfg.dt;
  const double eps = cfg.eps;
  const simd::KernelTable& k = cfg.kernels ? *cfg.kernels : simd::active_kernels();

  const detail::AgeGrid grid(kernel, dt / eps, true);
  detail::LineBuffer line(past, dt, grid.count, steps);
  Trajectory traj(past, dt, eps);
  traj.reserve(steps + 1);

  // Force at node m with current position c; lags j >= 1 read stored anchors only.
  auto force = [&](std::size_t m, double c) {
    const double t = static_cast<double>(m) * dt;
    const std::size_t active = grid.active(kernel, t);
    const auto b = detail::block(grid, line, static_cast<std::ptrdiff_t>(m), 1, active);
    return kernel.modulation(t) * detail::weighted_subgradient(psi, k, b.w, b.y, b.n, c, eps).mid();
  };

  double z = traj[0];
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const double f0 = v(t) - force(n, z);
    double next = z + dt * f0;
    if (cfg.scheme == Scheme::Heun) {
      const double f1 = v(t + dt) - force(n + 1, next);
      next = z + 0.5 * dt * (f0 + f1);
    }
    if (!std::isfinite(next))
      throw NumericalError("solve_smooth: non-finite state at t = " + std::to_string(t + dt));
    z = next;
    line.push(z);
    traj.append(z);
  }
  return traj;
}

}  // namespace rollsim
