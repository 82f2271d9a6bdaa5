#include <cmath>

#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/lap.hpp"
#include "lap/rng.hpp"

namespace lap {

double perturbation_sensitivity(const ModelHandle& model,
                                const ActivationCapture& capture, int layer, int k,
                                double alpha_frac, std::uint64_t seed,
                                int* skipped_out) {
  if (layer < 0 || layer >= capture.num_layers)
    throw data_error("perturbation_sensitivity: layer out of range");
  if (k < 1) throw data_error("perturbation_sensitivity: k must be >= 1");
  if (alpha_frac <= 0.0)
    throw data_error("perturbation_sensitivity: alpha_frac must be > 0");

  const int d = capture.hidden_dim;
  int skipped = 0;
  double total = 0.0;
  int used = 0;

  for (int p = 0; p < capture.num_prompts(); ++p) {
    std::span<const float> s = capture.state(layer, p);
    std::vector<double> h(s.begin(), s.end());
    const double norm = std::sqrt(kernels::sumsq_f64(h.data(), h.size()));
    if (norm == 0.0) {
      ++skipped;
      continue;
    }
    const double alpha = alpha_frac * norm;
    std::vector<double> base = resume_logits_f64(model, layer, h);

    double prompt_sum = 0.0;
    for (int kk = 0; kk < k; ++kk) {
      Rng dir_rng(derive_seed(seed, "lambda-dir", std::uint64_t(layer),
                              std::uint64_t(p), std::uint64_t(kk)));
      std::vector<double> eps = unit_direction(dir_rng, std::size_t(d));
      std::vector<double> hp = h;
      kernels::axpy_f64(alpha, eps.data(), hp.data(), hp.size());
      std::vector<double> pert = resume_logits_f64(model, layer, hp);
      double ss = 0.0;
      for (std::size_t i = 0; i < pert.size(); ++i) {
        const double diff = pert[i] - base[i];
        ss += diff * diff;
      }
      prompt_sum += std::sqrt(ss) / alpha;
    }
    total += prompt_sum / double(k);
    ++used;
  }

  if (skipped_out) *skipped_out = skipped;
  return used > 0 ? total / double(used) : 0.0;
}

}  // namespace lap
