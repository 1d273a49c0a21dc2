#pragma once

#include <limits>

#include "rollsim/history.hpp"
#include "rollsim/kernel.hpp"

namespace rollsim {

/// lim z(t) for ψ = u²/2, ρ = β·e^{−ζa}, v ≡ 0:
/// (ζ²z_p(0) + βζ∫_{−∞}^0 e^{ζτ}z_p(τ)dτ)/(ζ² + β).
double quadratic_final_position(double beta, double zeta, const PastData& past);

/// p∞(a) = ∫₀^a u_I − a·(∫ρ(ã)∫₀^ã u_I dã)/(1 + ∫ρ(ã)ã dã) for the quadratic potential.
double p_infinity_profile(const Kernel& kernel, const PastData& past, double a);

/// Closed form for ψ = |u| in the plastic regime |v∞| <= μ∞.
class PlasticProfile {
 public:
  PlasticProfile(double v_inf, Kernel profile, double z0);

  double v_inf() const { return v_inf_; }
  double z0() const { return z0_; }
  /// Stopping time, μ∞(t1) = |v∞|; +∞ when |v∞| = μ∞.
  double t1() const { return t1_; }
  double operator()(double t) const;
  double velocity(double t) const;
  double final_position() const { return (*this)(t1_); }

 private:
  double v_inf_;
  Kernel profile_;
  double z0_;
  double t1_;
};

PlasticProfile plastic_trajectory(double v_inf, const Kernel& profile, double z0);

/// z0 + v∞t − sgn(v∞)∫₀^t μ∞ for |v∞| > μ∞.
double kinematic_trajectory(double v_inf, const Kernel& profile, double z0, double t);
double kinematic_velocity(double v_inf, const Kernel& profile, double t);

/// 0 if |v∞| <= μ∞, else v∞ − sgn(v∞)μ∞.
double gamma_abs(double v_inf, double mu_inf);

/// ∫₀^t μ∞(τ)dτ by Gauss–Legendre panels.
double integrated_mu(const Kernel& profile, double t);

}  // namespace rollsim
