#include "rollsim/simd/force_kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace rollsim::simd {

#if defined(__aarch64__)
namespace {

double linear_force(const double* w, const double* y, std::size_t n, double c) {
  const float64x2_t vc = vdupq_n_f64(c);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) acc = vfmaq_f64(acc, vld1q_f64(w + j), vsubq_f64(vc, vld1q_f64(y + j)));
  double s = vaddvq_f64(acc);
  for (; j < n; ++j) s += w[j] * (c - y[j]);
  return s;
}

float64x2_t masked(float64x2_t w, uint64x2_t mask) {
  return vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(w), mask));
}

SignSums sign_sums(const double* w, const double* y, std::size_t n, double c) {
  const float64x2_t vc = vdupq_n_f64(c);
  float64x2_t pos = vdupq_n_f64(0.0);
  float64x2_t neg = vdupq_n_f64(0.0);
  float64x2_t tie = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t vw = vld1q_f64(w + j);
    const float64x2_t vy = vld1q_f64(y + j);
    pos = vaddq_f64(pos, masked(vw, vcgtq_f64(vc, vy)));
    neg = vaddq_f64(neg, masked(vw, vcltq_f64(vc, vy)));
    tie = vaddq_f64(tie, masked(vw, vceqq_f64(vc, vy)));
  }
  SignSums out{vaddvq_f64(pos) - vaddvq_f64(neg), vaddvq_f64(tie)};
  for (; j < n; ++j) {
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
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vi = vdupq_n_f64(inv_eps);
  const float64x2_t vr = vdupq_n_f64(r);
  const float64x2_t vr2 = vdupq_n_f64(r * r);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t u = vmulq_f64(vsubq_f64(vc, vld1q_f64(y + j)), vi);
    const float64x2_t u2 = vmulq_f64(u, u);
    const float64x2_t root = vsqrtq_f64(vaddq_f64(u2, vr2));
    const float64x2_t len = vdivq_f64(u2, vaddq_f64(root, vr));
    acc = vfmaq_f64(acc, vld1q_f64(w + j), vdivq_f64(vmulq_f64(len, u), root));
  }
  double s = vaddvq_f64(acc);
  if (j < n) s += scalar_kernels().tether_force(w + j, y + j, n - j, c, inv_eps, r);
  return s;
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{"neon", linear_force, sign_sums, tether_force};
  return &table;
}

#else

const KernelTable* neon_kernels() { return nullptr; }

#endif

}  // namespace rollsim::simd
