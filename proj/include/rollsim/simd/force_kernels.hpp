#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rollsim::simd {

struct SignSums {
  double sign;  // Σ w_j·sgn(c − y_j)
  double tie;   // Σ w_j over y_j == c
};

/// Weighted memory sums over anchors y_j. All kernels in a table compute the same quantities;
/// vector variants differ from the scalar reference only by summation order.
struct KernelTable {
  const char* name;
  /// Σ w_j·(c − y_j)
  double (*linear_force)(const double* w, const double* y, std::size_t n, double c);
  SignSums (*sign_sums)(const double* w, const double* y, std::size_t n, double c);
  /// Σ w_j·ψ′((c − y_j)·inv_eps) for the tether potential of radius r.
  double (*tether_force)(const double* w, const double* y, std::size_t n, double c, double inv_eps, double r);
};

const KernelTable& scalar_kernels();
/// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// Selected once from ROLLSIM_SIMD (scalar | avx2 | neon | auto, default auto).
const KernelTable& active_kernels();
/// Table by name; throws std::invalid_argument if unknown or unavailable.
const KernelTable& kernels_by_name(const std::string& name);

}  // namespace rollsim::simd
