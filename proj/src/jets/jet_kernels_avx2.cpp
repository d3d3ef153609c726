// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "threadsplit/jet_kernels.hpp"
#include "threadsplit/multi_index.hpp"

namespace threadsplit::kernels {

namespace {

void add_avx2(const double* a, const double* b, double* out, int n) {
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_avx2(const double* a, const double* b, double* out, int n) {
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void scale_avx2(const double* a, double s, double* out, int n) {
  const __m256d vs = _mm256_set1_pd(s);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
  }
  for (; i < n; ++i) out[i] = a[i] * s;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Each output slot owns a run of 4 or 8 zero-padded (coef, lhs, rhs) lanes:
// gather both operands, multiply, reduce horizontally.
void mul_avx2(const double* a, const double* b, double* out, int order) {
  const MulPlan& plan = MulPlan::instance();
  const int slots = kSizeForOrder[order];
  const double* coef = plan.padded_coef.data();
  const std::int32_t* lhs = plan.padded_lhs.data();
  const std::int32_t* rhs = plan.padded_rhs.data();
  for (int g = 0; g < slots; ++g) {
    const MulPlan::Run& run = plan.runs[g];
    int t = run.padded_begin;
    __m128i il = _mm_loadu_si128(reinterpret_cast<const __m128i*>(lhs + t));
    __m128i ir = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rhs + t));
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(coef + t),
                                _mm256_mul_pd(_mm256_i32gather_pd(a, il, 8), _mm256_i32gather_pd(b, ir, 8)));
    if (run.padded_length == 8) {
      t += 4;
      il = _mm_loadu_si128(reinterpret_cast<const __m128i*>(lhs + t));
      ir = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rhs + t));
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(coef + t),
                            _mm256_mul_pd(_mm256_i32gather_pd(a, il, 8), _mm256_i32gather_pd(b, ir, 8)), acc);
    }
    out[g] = hsum(acc);
  }
}

}  // namespace

const JetKernels* avx2_kernels() {
  static const JetKernels k{Isa::Avx2, add_avx2, sub_avx2, scale_avx2, mul_avx2};
  return &k;
}

}  // namespace threadsplit::kernels
