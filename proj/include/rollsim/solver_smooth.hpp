#pragma once

#include "rollsim/history.hpp"
#include "rollsim/kernel.hpp"
#include "rollsim/potential.hpp"
#include "rollsim/solver_config.hpp"
#include "rollsim/time_function.hpp"

namespace rollsim {

/// Trapezoid sum over a_j = j·dt/eps in [0, a_max) of ψ′((z(t) − z(t − eps·a_j))/eps)·ρ(a_j, t),
/// sampling `traj` (built with the same eps). Throws BreakpointCollision if a nonzero stretch
/// lands exactly on a jump of ψ′.
double memory_force(const Potential& psi, const Kernel& kernel, const Trajectory& traj, double t, double eps);

/// Explicit time stepping of ż + ∫ψ′((z(t) − z(t−εa))/ε)ρ(a,t)da = v(t). ψ′ must be Lipschitz.
Trajectory solve_smooth(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                        const SolverConfig& cfg);

}  // namespace rollsim
