// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; execution is gated by the runtime dispatcher.

#include "kernel_table.hpp"

#if LAP_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cstring>

namespace lap::kernels::detail {
namespace {

inline float hsum256_ps(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 sh = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, sh);
  sh = _mm_movehl_ps(sh, sums);
  sums = _mm_add_ss(sums, sh);
  return _mm_cvtss_f32(sums);
}

inline double hsum256_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

float v_dot_f32(const float* a, const float* b, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
  }
  float sum = hsum256_ps(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double v_dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double sum = hsum256_pd(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double v_sumsq_f32(const float* a, std::size_t n) {
  // widen to double before squaring so the accumulator matches scalar
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_cvtps_pd(_mm_loadu_ps(a + i));
    acc = _mm256_fmadd_pd(x, x, acc);
  }
  double sum = hsum256_pd(acc);
  for (; i < n; ++i) sum += double(a[i]) * double(a[i]);
  return sum;
}

double v_sumsq_f64(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(x, x, acc);
  }
  double sum = hsum256_pd(acc);
  for (; i < n; ++i) sum += a[i] * a[i];
  return sum;
}

void v_axpy_f32(float a, const float* x, float* y, std::size_t n) {
  __m256 av = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 r = _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i));
    _mm256_storeu_ps(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_axpy_f64(double a, const double* x, double* y, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_matvec_f32(const float* m, std::size_t rows, std::size_t cols,
                  const float* x, float* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = v_dot_f32(m + r * cols, x, cols);
}

void v_matvec_f64(const double* m, std::size_t rows, std::size_t cols,
                  const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = v_dot_f64(m + r * cols, x, cols);
}

void v_gemm_f64(const double* a, std::size_t m, std::size_t k, const double* b,
                std::size_t n, double* c, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* a_row = a + i * k;
    double* c_row = c + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const __m256d a_val = _mm256_set1_pd(a_row[kk]);
      const double* b_row = b + kk * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d cv = _mm256_loadu_pd(c_row + j);
        cv = _mm256_fmadd_pd(a_val, _mm256_loadu_pd(b_row + j), cv);
        _mm256_storeu_pd(c_row + j, cv);
      }
      for (; j < n; ++j) c_row[j] += a_row[kk] * b_row[j];
    }
  }
}

void v_gemm_abt_f64(const double* a, std::size_t m, std::size_t k,
                    const double* b, std::size_t n, double* c,
                    bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* a_row = a + i * k;
    double* c_row = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = v_dot_f64(a_row, b + j * k, k);
      c_row[j] = accumulate ? c_row[j] + v : v;
    }
  }
}

void v_gemm_atb_acc_f64(const double* a, std::size_t m, std::size_t k,
                        const double* b, std::size_t n, double* c) {
  for (std::size_t row = 0; row < m; ++row) {
    const double* a_row = a + row * k;
    const double* b_row = b + row * n;
    for (std::size_t i = 0; i < k; ++i) {
      const __m256d a_val = _mm256_set1_pd(a_row[i]);
      double* c_row = c + i * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d cv = _mm256_loadu_pd(c_row + j);
        cv = _mm256_fmadd_pd(a_val, _mm256_loadu_pd(b_row + j), cv);
        _mm256_storeu_pd(c_row + j, cv);
      }
      for (; j < n; ++j) c_row[j] += a_row[i] * b_row[j];
    }
  }
}

}  // namespace

const KernelTable avx2_table = {
    v_dot_f32,  v_dot_f64,  v_sumsq_f32,    v_sumsq_f64,
    v_axpy_f32, v_axpy_f64, v_matvec_f32,   v_matvec_f64,
    v_gemm_f64, v_gemm_abt_f64, v_gemm_atb_acc_f64,
};

}  // namespace lap::kernels::detail

#endif  // LAP_HAVE_AVX2_BUILD
