#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rollsim/history.hpp"
#include "rollsim/kernel.hpp"
#include "rollsim/potential.hpp"
#include "rollsim/simd/force_kernels.hpp"

namespace rollsim::detail {

/// Static part of the age quadrature: profile(a_j)·Δa·c_j for a_j = jΔa < a_max, stored
/// in reverse (rev[i] = w_{J−1−i}) so that it lines up with the anchors H[m−J+1], …, H[m].
struct AgeGrid {
  double da = 0.0;
  std::size_t count = 0;  // J
  std::vector<double> rev;

  AgeGrid(const Kernel& kernel, double da_, bool trapezoid) : da(da_) {
    count = static_cast<std::size_t>(std::ceil(kernel.a_max() / da - 1e-9));
    if (count == 0) count = 1;
    rev.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
      const double a = static_cast<double>(j) * da;
      const double c = (trapezoid && j == 0) ? 0.5 : 1.0;
      rev[count - 1 - j] = a < kernel.a_max() ? c * da * kernel.profile(a) : 0.0;
    }
  }

  /// Number of leading lags j with nonzero density at time t.
  std::size_t active(const Kernel& kernel, double t) const {
    if (!kernel.truncated()) return count;
    const double k = std::ceil(t / da - 1e-9);
    if (k <= 0.0) return 0;
    return k >= static_cast<double>(count) ? count : static_cast<std::size_t>(k);
  }
};

/// Line H[k] = z(k·dt) for k = −J..N, the negative part sampled from the past.
class LineBuffer {
 public:
  LineBuffer(const PastData& past, double dt, std::size_t past_nodes, std::size_t steps) : offset_(past_nodes) {
    buf_.reserve(past_nodes + steps + 1);
    for (std::size_t i = past_nodes; i > 0; --i) buf_.push_back(past(-static_cast<double>(i) * dt));
    buf_.push_back(past(0.0));
  }

  void push(double z) { buf_.push_back(z); }
  double at(std::ptrdiff_t k) const { return buf_[static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(offset_))]; }
  const double* ptr(std::ptrdiff_t k) const {
    return buf_.data() + static_cast<std::ptrdiff_t>(offset_) + k;
  }

 private:
  std::size_t offset_;
  std::vector<double> buf_;
};

/// Anchors H[m − j] and weights w_j for j ∈ [jlo, jhi) as aligned contiguous arrays.
struct MemoryBlock {
  const double* w;
  const double* y;
  std::size_t n;
};

inline MemoryBlock block(const AgeGrid& grid, const LineBuffer& line, std::ptrdiff_t m, std::size_t jlo,
                         std::size_t jhi) {
  if (jhi <= jlo) return {grid.rev.data(), line.ptr(m), 0};
  return {grid.rev.data() + (grid.count - jhi), line.ptr(m - static_cast<std::ptrdiff_t>(jhi) + 1), jhi - jlo};
}

/// Σ w_i·∂ψ((c − y_i)/eps), routed to the vector kernels for the closed-form potentials.
inline SubdiffInterval weighted_subgradient(const Potential& psi, const simd::KernelTable& k, const double* w,
                                            const double* y, std::size_t n, double c, double eps) {
  if (n == 0) return {0.0, 0.0};
  switch (psi.kind()) {
    case Potential::Kind::Quadratic: {
      const double f = k.linear_force(w, y, n, c) / eps;
      return {f, f};
    }
    case Potential::Kind::Tether: {
      const double f = k.tether_force(w, y, n, c, 1.0 / eps, psi.tether_radius());
      return {f, f};
    }
    case Potential::Kind::AbsoluteValue: {
      const simd::SignSums s = k.sign_sums(w, y, n, c);
      return {s.sign - s.tie, s.sign + s.tie};
    }
    default: break;
  }
  SubdiffInterval total{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    total = total + w[i] * psi.subdifferential((c - y[i]) / eps);
  }
  return total;
}

}  // namespace rollsim::detail
