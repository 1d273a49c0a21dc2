#include "rollsim/simd/force_kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define ROLLSIM_HAVE_AVX2 1
#include <immintrin.h>
#endif

namespace rollsim::simd {

#if ROLLSIM_HAVE_AVX2
namespace {

#define AVX2_TARGET __attribute__((target("avx2,fma")))

AVX2_TARGET double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

AVX2_TARGET double linear_force(const double* w, const double* y, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_sub_pd(vc, _mm256_loadu_pd(y + j));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), d, acc);
  }
  double s = hsum(acc);
  for (; j < n; ++j) s += w[j] * (c - y[j]);
  return s;
}

AVX2_TARGET SignSums sign_sums(const double* w, const double* y, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d pos = _mm256_setzero_pd();
  __m256d neg = _mm256_setzero_pd();
  __m256d tie = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d vw = _mm256_loadu_pd(w + j);
    const __m256d vy = _mm256_loadu_pd(y + j);
    pos = _mm256_add_pd(pos, _mm256_and_pd(vw, _mm256_cmp_pd(vc, vy, _CMP_GT_OQ)));
    neg = _mm256_add_pd(neg, _mm256_and_pd(vw, _mm256_cmp_pd(vc, vy, _CMP_LT_OQ)));
    tie = _mm256_add_pd(tie, _mm256_and_pd(vw, _mm256_cmp_pd(vc, vy, _CMP_EQ_OQ)));
  }
  SignSums out{hsum(pos) - hsum(neg), hsum(tie)};
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

AVX2_TARGET double tether_force(const double* w, const double* y, std::size_t n, double c, double inv_eps, double r) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vi = _mm256_set1_pd(inv_eps);
  const __m256d vr = _mm256_set1_pd(r);
  const __m256d vr2 = _mm256_set1_pd(r * r);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d u = _mm256_mul_pd(_mm256_sub_pd(vc, _mm256_loadu_pd(y + j)), vi);
    const __m256d u2 = _mm256_mul_pd(u, u);
    const __m256d root = _mm256_sqrt_pd(_mm256_add_pd(u2, vr2));
    const __m256d len = _mm256_div_pd(u2, _mm256_add_pd(root, vr));
    const __m256d f = _mm256_div_pd(_mm256_mul_pd(len, u), root);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), f, acc);
  }
  double s = hsum(acc);
  if (j < n) s += scalar_kernels().tether_force(w + j, y + j, n - j, c, inv_eps, r);
  return s;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable table{"avx2", linear_force, sign_sums, tether_force};
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace rollsim::simd
