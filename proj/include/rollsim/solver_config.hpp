#pragma once

#include <cstddef>
#include <optional>

namespace rollsim {

namespace simd {
struct KernelTable;
}

enum class Scheme { ExplicitEuler, Heun };

/// Time grid t_n = n·dt on [0, T]; the age grid is a_j = j·dt/eps so that t − eps·a_j is a time node.
struct SolverConfig {
  double eps = 1.0;
  double T = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::ExplicitEuler;
  double tol_fixedpoint = 1e-12;  // reserved
  /// If given, must equal dt/eps.
  std::optional<double> age_step;
  /// Memory-sum kernels; nullptr selects simd::active_kernels().
  const simd::KernelTable* kernels = nullptr;

  double age_step_value() const { return dt / eps; }
  /// Validates and returns the number of steps round(T/dt).
  std::size_t steps() const;
};

}  // namespace rollsim
