#pragma once
// Data-parallel kernels behind the numeric hot paths (readout matvecs,
// probe GEMMs, reductions). Scalar reference implementations always exist;
// an AVX2/FMA variant is selected at runtime when the CPU supports it.
// The two paths are equivalence-tested against each other.

#include <cstddef>
#include <string>

namespace lap::kernels {

enum class Isa { scalar, avx2 };

// Active instruction set. Resolved once from CPUID, overridable with
// LAP_SIMD=scalar|avx2|auto (set before first use) or force_isa().
Isa active_isa();
const char* isa_name(Isa isa);

// Test hook: pin the dispatch to one path. Throws if the requested path
// is unsupported on this CPU.
void force_isa(Isa isa);

// ---- reductions -----------------------------------------------------------

float  dot_f32(const float* a, const float* b, std::size_t n);
double dot_f64(const double* a, const double* b, std::size_t n);

// Sum of squares, accumulated in double regardless of input width.
double sumsq_f32(const float* a, std::size_t n);
double sumsq_f64(const double* a, std::size_t n);

// Index of the maximum element; ties resolved to the lowest index.
std::size_t argmax_f32(const float* a, std::size_t n);
std::size_t argmax_f64(const double* a, std::size_t n);

// ---- elementwise ----------------------------------------------------------

// y += a * x
void axpy_f32(float a, const float* x, float* y, std::size_t n);
void axpy_f64(double a, const double* x, double* y, std::size_t n);

// ---- matrix ---------------------------------------------------------------

// y[rows] = m[rows x cols] * x[cols], m row-major.
void matvec_f32(const float* m, std::size_t rows, std::size_t cols,
                const float* x, float* y);
void matvec_f64(const double* m, std::size_t rows, std::size_t cols,
                const double* x, double* y);

// c[m x n] = a[m x k] * b[k x n], all row-major. accumulate keeps c.
void gemm_f64(const double* a, std::size_t m, std::size_t k,
              const double* b, std::size_t n, double* c, bool accumulate);

// c[m x n] (+)= a[m x k] * b[n x k]^T  (b stored row-major as [n][k]).
void gemm_abt_f64(const double* a, std::size_t m, std::size_t k,
                  const double* b, std::size_t n, double* c, bool accumulate);

// c[k x n] += a[m x k]^T * b[m x n]  (a stored row-major as [m][k]).
void gemm_atb_acc_f64(const double* a, std::size_t m, std::size_t k,
                      const double* b, std::size_t n, double* c);

}  // namespace lap::kernels
