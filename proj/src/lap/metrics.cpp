#include <algorithm>

#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/lap.hpp"

namespace lap {

int regime_number(Regime r) { return static_cast<int>(r); }

namespace {

void check_layer(const ActivationCapture& capture, int layer, const char* who) {
  if (layer < 0 || layer >= capture.num_layers)
    throw data_error(std::string(who) + ": layer " + std::to_string(layer) +
                     " out of range [0, " + std::to_string(capture.num_layers) + ")");
}

int lens_argmax(const ModelHandle& model, const ActivationCapture& capture,
                int layer, int prompt) {
  std::vector<float> logits =
      readout_f32(model.readout(), capture.state(layer, prompt), layer);
  return int(kernels::argmax_f32(logits.data(), logits.size()));
}

}  // namespace

double a_lin(const ModelHandle& model, const ActivationCapture& capture, int layer) {
  check_layer(capture, layer, "a_lin");
  const int n = capture.num_prompts();
  if (n == 0) return 0.0;
  int hits = 0;
  for (int p = 0; p < n; ++p)
    if (lens_argmax(model, capture, layer, p) == capture.answer_token_ids[std::size_t(p)])
      ++hits;
  return double(hits) / double(n);
}

std::pair<std::optional<double>, std::optional<double>> accuracy_split(
    const ModelHandle& model, const ActivationCapture& capture, int layer) {
  check_layer(capture, layer, "accuracy_split");
  int n_a = 0, n_b = 0, hit_a = 0, hit_b = 0;
  for (int p = 0; p < capture.num_prompts(); ++p) {
    const bool model_correct =
        capture.model_top1[std::size_t(p)] == capture.answer_token_ids[std::size_t(p)];
    const bool lens_hit = lens_argmax(model, capture, layer, p) ==
                          capture.answer_token_ids[std::size_t(p)];
    if (model_correct) {
      ++n_a;
      hit_a += lens_hit ? 1 : 0;
    } else {
      ++n_b;
      hit_b += lens_hit ? 1 : 0;
    }
  }
  std::optional<double> acc_a, acc_b;
  if (n_a > 0) acc_a = double(hit_a) / double(n_a);
  if (n_b > 0) acc_b = double(hit_b) / double(n_b);
  return {acc_a, acc_b};
}

CrystallizationGap crystallization_gap_series(std::span<const double> a_mlp_series,
                                              std::span<const double> a_lin_series,
                                              double mlp_thresh, double lin_thresh) {
  if (a_mlp_series.size() != a_lin_series.size())
    throw data_error("crystallization_gap: series length mismatch");
  const int depth = int(a_mlp_series.size());
  if (depth == 0) throw data_error("crystallization_gap: empty profile");

  CrystallizationGap gap;
  for (int l = 0; l < depth; ++l) {
    if (!gap.mlp_layer && a_mlp_series[std::size_t(l)] > mlp_thresh) gap.mlp_layer = l;
    if (!gap.lin_layer && a_lin_series[std::size_t(l)] > lin_thresh) gap.lin_layer = l;
  }
  if (!gap.mlp_layer || !gap.lin_layer) {
    gap.open_ended = true;
    return gap;
  }
  gap.gap_layers = *gap.lin_layer - *gap.mlp_layer;
  if (*gap.gap_layers < 0) {
    gap.co_emerge = true;
  } else {
    gap.gap_fraction = double(*gap.gap_layers) / double(depth);
  }
  return gap;
}

CrystallizationGap crystallization_gap(const LapProfile& profile, double mlp_thresh,
                                       double lin_thresh) {
  std::vector<double> mlp, lin;
  for (const auto& lm : profile.layers) {
    if (!lm.a_mlp)
      throw data_error("crystallization_gap: a_mlp missing at layer " +
                       std::to_string(lm.layer));
    mlp.push_back(*lm.a_mlp);
    lin.push_back(lm.a_lin);
  }
  return crystallization_gap_series(mlp, lin, mlp_thresh, lin_thresh);
}

Regime classify_regime(const LapProfile& profile, double mlp_thresh, double lin_go) {
  if (!profile.peak_a_mlp) return Regime::undetermined;
  if (*profile.peak_a_mlp < mlp_thresh) return Regime::not_represented;
  if (profile.peak_a_lin < lin_go) return Regime::not_output_aligned;
  return Regime::output_aligned;
}

}  // namespace lap
