#include "lap/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernel_table.hpp"

namespace lap::kernels {

namespace {

using detail::KernelTable;

bool cpu_has_avx2() {
#if LAP_HAVE_AVX2_BUILD
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa pick_default() {
  if (const char* env = std::getenv("LAP_SIMD")) {
    std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2") {
      if (!cpu_has_avx2())
        throw std::runtime_error("LAP_SIMD=avx2 requested but CPU lacks AVX2/FMA");
      return Isa::avx2;
    }
    // anything else (including "auto") falls through to detection
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

struct Dispatch {
  Isa isa;
  const KernelTable* table;
  Dispatch() : isa(pick_default()), table(select(isa)) {}
  static const KernelTable* select(Isa isa) {
#if LAP_HAVE_AVX2_BUILD
    if (isa == Isa::avx2) return &detail::avx2_table;
#endif
    return &detail::scalar_table;
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Isa active_isa() { return dispatch().isa; }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2())
    throw std::runtime_error("force_isa: CPU lacks AVX2/FMA");
  dispatch().isa = isa;
  dispatch().table = Dispatch::select(isa);
}

float dot_f32(const float* a, const float* b, std::size_t n) {
  return dispatch().table->dot_f32(a, b, n);
}
double dot_f64(const double* a, const double* b, std::size_t n) {
  return dispatch().table->dot_f64(a, b, n);
}
double sumsq_f32(const float* a, std::size_t n) {
  return dispatch().table->sumsq_f32(a, n);
}
double sumsq_f64(const double* a, std::size_t n) {
  return dispatch().table->sumsq_f64(a, n);
}
void axpy_f32(float a, const float* x, float* y, std::size_t n) {
  dispatch().table->axpy_f32(a, x, y, n);
}
void axpy_f64(double a, const double* x, double* y, std::size_t n) {
  dispatch().table->axpy_f64(a, x, y, n);
}
void matvec_f32(const float* m, std::size_t rows, std::size_t cols,
                const float* x, float* y) {
  dispatch().table->matvec_f32(m, rows, cols, x, y);
}
void matvec_f64(const double* m, std::size_t rows, std::size_t cols,
                const double* x, double* y) {
  dispatch().table->matvec_f64(m, rows, cols, x, y);
}
void gemm_f64(const double* a, std::size_t m, std::size_t k, const double* b,
              std::size_t n, double* c, bool accumulate) {
  dispatch().table->gemm_f64(a, m, k, b, n, c, accumulate);
}
void gemm_abt_f64(const double* a, std::size_t m, std::size_t k,
                  const double* b, std::size_t n, double* c, bool accumulate) {
  dispatch().table->gemm_abt_f64(a, m, k, b, n, c, accumulate);
}
void gemm_atb_acc_f64(const double* a, std::size_t m, std::size_t k,
                      const double* b, std::size_t n, double* c) {
  dispatch().table->gemm_atb_acc_f64(a, m, k, b, n, c);
}

// argmax is shared: pure comparisons, so both paths would be identical anyway.
// Ties resolve to the lowest index; this is the token-id tie-break used by
// every accuracy metric.
std::size_t argmax_f32(const float* a, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (a[i] > a[best]) best = i;
  return best;
}

std::size_t argmax_f64(const double* a, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (a[i] > a[best]) best = i;
  return best;
}

}  // namespace lap::kernels
