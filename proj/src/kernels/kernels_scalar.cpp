// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against.

#include "kernel_table.hpp"

#include <cstring>

namespace lap::kernels::detail {
namespace {

float s_dot_f32(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double s_dot_f64(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double s_sumsq_f32(const float* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += double(a[i]) * double(a[i]);
  return acc;
}

double s_sumsq_f64(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void s_axpy_f32(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_axpy_f64(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_matvec_f32(const float* m, std::size_t rows, std::size_t cols,
                  const float* x, float* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const float* row = m + r * cols;
    float acc = 0.0f;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void s_matvec_f64(const double* m, std::size_t rows, std::size_t cols,
                  const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = m + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void s_gemm_f64(const double* a, std::size_t m, std::size_t k, const double* b,
                std::size_t n, double* c, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* a_row = a + i * k;
    double* c_row = c + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double a_val = a_row[kk];
      const double* b_row = b + kk * n;
      for (std::size_t j = 0; j < n; ++j) c_row[j] += a_val * b_row[j];
    }
  }
}

void s_gemm_abt_f64(const double* a, std::size_t m, std::size_t k,
                    const double* b, std::size_t n, double* c,
                    bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* a_row = a + i * k;
    double* c_row = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = s_dot_f64(a_row, b + j * k, k);
      c_row[j] = accumulate ? c_row[j] + v : v;
    }
  }
}

void s_gemm_atb_acc_f64(const double* a, std::size_t m, std::size_t k,
                        const double* b, std::size_t n, double* c) {
  for (std::size_t row = 0; row < m; ++row) {
    const double* a_row = a + row * k;
    const double* b_row = b + row * n;
    for (std::size_t i = 0; i < k; ++i) {
      const double a_val = a_row[i];
      double* c_row = c + i * n;
      for (std::size_t j = 0; j < n; ++j) c_row[j] += a_val * b_row[j];
    }
  }
}

}  // namespace

const KernelTable scalar_table = {
    s_dot_f32,  s_dot_f64,  s_sumsq_f32,    s_sumsq_f64,
    s_axpy_f32, s_axpy_f64, s_matvec_f32,   s_matvec_f64,
    s_gemm_f64, s_gemm_abt_f64, s_gemm_atb_acc_f64,
};

}  // namespace lap::kernels::detail
