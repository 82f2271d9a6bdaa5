#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/lap.hpp"
#include "lap/reference_model.hpp"
#include "lap/rng.hpp"
#include "test_support.hpp"

using namespace lap;

namespace {

ReferenceModelConfig small_config() {
  ReferenceModelConfig cfg;
  cfg.num_layers = 4;
  cfg.writer_layer = 1;
  return cfg;
}

ActivationCapture planted_capture(const ModelHandle& model,
                                  const ReferenceModelConfig& cfg) {
  auto [fam, rep] = validate_single_token(reference_planted_family(cfg), model);
  return capture_activations(model, fam.items, fam.family_id);
}

// replicate the sampled directions and apply the exact tail matrix
double tail_matrix_oracle(const ReferenceBackend& ref, const ActivationCapture& cap,
                          int layer, int k, double alpha_frac, std::uint64_t seed,
                          std::vector<double>* samples = nullptr) {
  const int d = cap.hidden_dim;
  const int v = ref.vocab_size();
  const std::vector<double> m = ref.tail_matrix(layer);
  double total = 0.0;
  int used = 0;
  for (int p = 0; p < cap.num_prompts(); ++p) {
    std::span<const float> s = cap.state(layer, p);
    std::vector<double> h(s.begin(), s.end());
    const double norm = std::sqrt(kernels::sumsq_f64(h.data(), h.size()));
    if (norm == 0.0) continue;
    double prompt_sum = 0.0;
    for (int kk = 0; kk < k; ++kk) {
      Rng rng(derive_seed(seed, "lambda-dir", std::uint64_t(layer), std::uint64_t(p),
                          std::uint64_t(kk)));
      std::vector<double> eps = unit_direction(rng, std::size_t(d));
      // |f(h + a e) - f(h)| / a = |M e| for an exactly linear tail
      double ss = 0.0;
      for (int row = 0; row < v; ++row) {
        double dot = 0.0;
        for (int c = 0; c < d; ++c)
          dot += m[std::size_t(row) * std::size_t(d) + std::size_t(c)] *
                 eps[std::size_t(c)];
        ss += dot * dot;
      }
      const double quotient = std::sqrt(ss);
      prompt_sum += quotient;
      if (samples) samples->push_back(quotient);
    }
    total += prompt_sum / double(k);
    ++used;
  }
  (void)alpha_frac;
  return total / double(used);
}

}  // namespace

TEST_CASE("lambda matches the direct matrix-application oracle within 1e-6") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  const ReferenceBackend& ref = reference_backend(model);
  ActivationCapture cap = planted_capture(model, cfg);

  for (int layer = cfg.writer_layer; layer < cfg.num_layers; ++layer) {
    const double measured = perturbation_sensitivity(model, cap, layer, 10, 0.01, 5);
    const double oracle = tail_matrix_oracle(ref, cap, layer, 10, 0.01, 5);
    CHECK(measured == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("k=1 equals the single-direction quotient computed by hand") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  ActivationCapture cap = planted_capture(model, cfg);
  const int layer = 2;
  const std::uint64_t seed = 11;

  double expected = 0.0;
  for (int p = 0; p < cap.num_prompts(); ++p) {
    std::span<const float> s = cap.state(layer, p);
    std::vector<double> h(s.begin(), s.end());
    const double norm = std::sqrt(kernels::sumsq_f64(h.data(), h.size()));
    const double alpha = 0.01 * norm;
    Rng rng(derive_seed(seed, "lambda-dir", std::uint64_t(layer), std::uint64_t(p), 0));
    std::vector<double> eps = unit_direction(rng, h.size());
    std::vector<double> hp = h;
    for (std::size_t i = 0; i < hp.size(); ++i) hp[i] += alpha * eps[i];
    std::vector<double> base = resume_logits_f64(model, layer, h);
    std::vector<double> pert = resume_logits_f64(model, layer, hp);
    double ss = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double diff = pert[i] - base[i];
      ss += diff * diff;
    }
    expected += std::sqrt(ss) / alpha;
  }
  expected /= double(cap.num_prompts());
  CHECK(perturbation_sensitivity(model, cap, layer, 1, 0.01, seed) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("lambda is deterministic, nonnegative, and seed-sensitive") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  ActivationCapture cap = planted_capture(model, cfg);
  const double a = perturbation_sensitivity(model, cap, 2, 10, 0.01, 3);
  const double b = perturbation_sensitivity(model, cap, 2, 10, 0.01, 3);
  const double c = perturbation_sensitivity(model, cap, 2, 10, 0.01, 4);
  CHECK(a == b);
  CHECK(a >= 0.0);
  CHECK(a != c);
}

TEST_CASE("doubling K moves lambda by less than three standard errors") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  const ReferenceBackend& ref = reference_backend(model);
  ActivationCapture cap = planted_capture(model, cfg);
  const int layer = 2;

  std::vector<double> samples;
  const double lam_k = perturbation_sensitivity(model, cap, layer, 10, 0.01, 9);
  const double lam_2k = perturbation_sensitivity(model, cap, layer, 20, 0.01, 9);
  tail_matrix_oracle(ref, cap, layer, 20, 0.01, 9, &samples);
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= double(samples.size());
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= double(samples.size() - 1);
  const double se = std::sqrt(var / double(samples.size()));
  CHECK(std::fabs(lam_2k - lam_k) < 3.0 * se + 1e-12);
}

TEST_CASE("zero states are skipped with a count") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  // hand-built capture on the reference model: one real state, one zero state
  ActivationCapture cap = planted_capture(model, cfg);
  ActivationCapture manual = cap;
  manual.items.resize(2);
  manual.answer_token_ids.resize(2);
  manual.model_top1.resize(2);
  for (auto& layer : manual.states) {
    layer.resize(2 * std::size_t(cfg.hidden_dim));
    for (int i = 0; i < cfg.hidden_dim; ++i)
      layer[std::size_t(cfg.hidden_dim) + std::size_t(i)] = 0.0f;
  }
  int skipped = -1;
  const double lam = perturbation_sensitivity(model, manual, 1, 5, 0.01, 0, &skipped);
  CHECK(skipped == 1);
  CHECK(lam > 0.0);

  // all states zero: skipped entirely, lambda falls back to zero
  for (auto& layer : manual.states) std::fill(layer.begin(), layer.end(), 0.0f);
  const double lam0 = perturbation_sensitivity(model, manual, 1, 5, 0.01, 0, &skipped);
  CHECK(skipped == 2);
  CHECK(lam0 == 0.0);
}

TEST_CASE("argument validation") {
  const ReferenceModelConfig cfg = small_config();
  ModelHandle model = build_reference_model(cfg);
  ActivationCapture cap = planted_capture(model, cfg);
  CHECK_THROWS_AS(perturbation_sensitivity(model, cap, -1, 10, 0.01, 0), Error);
  CHECK_THROWS_AS(perturbation_sensitivity(model, cap, 0, 0, 0.01, 0), Error);
  CHECK_THROWS_AS(perturbation_sensitivity(model, cap, 0, 10, 0.0, 0), Error);
}
