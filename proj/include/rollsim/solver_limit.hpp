#pragma once

#include "rollsim/history.hpp"
#include "rollsim/kernel.hpp"
#include "rollsim/potential.hpp"
#include "rollsim/time_function.hpp"

namespace rollsim {

/// Constant data for the asymptotic velocity problem.
struct LimitData {
  Potential psi;
  Kernel rho_inf;
  double v_inf;
};

/// w ↦ w + ∫ ∂ψ(aw) ρ(a,t) da; an interval only at w = 0 when ψ′ jumps at 0.
SubdiffInterval limit_force(const Potential& psi, const Kernel& kernel, double w, double t);

/// Unique w with v ∈ w + ∫∂ψ(aw)ρ(a,t)da, by bisection on [−|v|−1, |v|+1] to width 1e−12.
double limit_velocity(const Potential& psi, const Kernel& kernel, double v, double t);

/// J_t(w) − J_t(y) for J_t(w) = w²/2 − vw + ∫ψ(aw)/a·ρ(a,t)da.
double limit_energy_increment(const Potential& psi, const Kernel& kernel, double v, double t, double w, double y);
/// Minimizer of J_t by golden-section search on [−|v|, |v|].
double limit_velocity_by_minimization(const Potential& psi, const Kernel& kernel, double v, double t);

/// z₀(t) = z_p(0) + cumulative trapezoid of limit_velocity on the grid n·dt.
Trajectory integrate_limit(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                           double T, double dt);

/// γ solving γ + ∫∂ψ(aγ)ρ∞(a)da ∋ v∞ (ρ∞ = the kernel as t → ∞).
double asymptotic_velocity(const LimitData& data);

}  // namespace rollsim
