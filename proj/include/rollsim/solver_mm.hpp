#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rollsim/history.hpp"
#include "rollsim/kernel.hpp"
#include "rollsim/potential.hpp"
#include "rollsim/solver_config.hpp"
#include "rollsim/time_function.hpp"

namespace rollsim {

/// E(w) = (w − previous)²/(2dt) + eps·scale·Σ_j weights_j·ψ((w − anchors_j)/eps) − drive·w.
struct StepEnergy {
  const Potential* psi = nullptr;
  double previous = 0.0;
  double dt = 1.0;
  double drive = 0.0;
  double eps = 1.0;
  std::span<const double> weights;
  std::span<const double> anchors;
  double weight_scale = 1.0;
  const simd::KernelTable* kernels = nullptr;

  double energy(double w) const;
  /// E(x) − E(y) without cancellation.
  double energy_increment(double x, double y) const;
  SubdiffInterval subgradient(double w) const;
};

/// Unique minimizer of a step energy.
double minimize_step(const StepEnergy& e);

/// Minimizing-movements time stepping: Zⁿ = argmin E_n with anchors Zⁿ⁻¹⁻ʲ.
Trajectory solve_mm(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                    const SolverConfig& cfg);

/// Step n of solve_mm rebuilt from a finished trajectory (for certificates and tests).
struct MmStep {
  std::vector<double> weights;
  std::vector<double> anchors;
  double previous;
  double drive;
  double dt;
  double eps;

  StepEnergy energy(const Potential& psi) const;
};
MmStep reconstruct_mm_step(const Kernel& kernel, const TimeFunction& v, const Trajectory& traj, std::size_t n);

}  // namespace rollsim
