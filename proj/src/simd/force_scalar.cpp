#include <cmath>

#include "rollsim/simd/force_kernels.hpp"

namespace rollsim::simd {
namespace {

double linear_force(const double* w, const double* y, std::size_t n, double c) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += w[j] * (c - y[j]);
  return s;
}

SignSums sign_sums(const double* w, const double* y, std::size_t n, double c) {
  SignSums out{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    if (c > y[j])
      out.sign += w[j];
    else if (c < y[j])
      out.sign -= w[j];
    else
      out.tie += w[j];
  }
  return out;
}

double tether_force(const double* w, const double* y, std::size_t n, double c, double inv_eps, double r) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = (c - y[j]) * inv_eps;
    const double root = std::sqrt(u * u + r * r);
    s += w[j] * (u * u / (root + r)) * u / root;
  }
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", linear_force, sign_sums, tether_force};
  return table;
}

}  // namespace rollsim::simd
