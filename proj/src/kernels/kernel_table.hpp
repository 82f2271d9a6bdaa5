#pragma once
// Internal: per-ISA kernel entry points and the dispatch table.

#include <cstddef>

namespace lap::kernels::detail {

struct KernelTable {
  float (*dot_f32)(const float*, const float*, std::size_t);
  double (*dot_f64)(const double*, const double*, std::size_t);
  double (*sumsq_f32)(const float*, std::size_t);
  double (*sumsq_f64)(const double*, std::size_t);
  void (*axpy_f32)(float, const float*, float*, std::size_t);
  void (*axpy_f64)(double, const double*, double*, std::size_t);
  void (*matvec_f32)(const float*, std::size_t, std::size_t, const float*, float*);
  void (*matvec_f64)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*gemm_f64)(const double*, std::size_t, std::size_t, const double*,
                   std::size_t, double*, bool);
  void (*gemm_abt_f64)(const double*, std::size_t, std::size_t, const double*,
                       std::size_t, double*, bool);
  void (*gemm_atb_acc_f64)(const double*, std::size_t, std::size_t,
                           const double*, std::size_t, double*);
};

extern const KernelTable scalar_table;

#if defined(__x86_64__) || defined(_M_X64)
#define LAP_HAVE_AVX2_BUILD 1
extern const KernelTable avx2_table;
#else
#define LAP_HAVE_AVX2_BUILD 0
#endif

}  // namespace lap::kernels::detail
