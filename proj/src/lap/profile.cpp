#include <algorithm>

#include "lap/error.hpp"
#include "lap/lap.hpp"
#include "lap/rng.hpp"

namespace lap {

LapProfile lap_profile(const ModelHandle& model, const ActivationCapture& capture,
                       const ProfileOptions& options) {
  LapProfile profile;
  profile.model_id = capture.model_id;
  profile.family_id = capture.family_id;
  profile.final_layer = capture.num_layers - 1;

  for (int l = 0; l < capture.num_layers; ++l) {
    LayerMetrics m;
    m.layer = l;
    m.a_lin = a_lin(model, capture, l);
    if (options.acc_split) {
      auto [acc_a, acc_b] = accuracy_split(model, capture, l);
      m.acc_a = acc_a;
      m.acc_b = acc_b;
    }
    if (options.probes) {
      ProbeConfig cfg = options.probe;
      cfg.seed = derive_seed(options.seed, "probe", std::uint64_t(l));
      TrainedProbe probe = train_residual_probe(model, capture, l, cfg);
      ProbeAccuracy acc = a_mlp_detail(model, capture, probe, l);
      m.a_mlp = acc.full;
      m.a_mlp_train = acc.train;
      m.a_mlp_heldout = acc.heldout;
      m.delta = acc.full - m.a_lin;
    }
    if (options.lambda) {
      m.lambda = perturbation_sensitivity(model, capture, l, options.lambda_k,
                                          options.lambda_alpha_frac,
                                          derive_seed(options.seed, "lambda"));
    }
    profile.layers.push_back(std::move(m));
  }

  if (profile.layers.empty()) throw data_error("lap_profile: capture has no layers");

  profile.peak_a_lin = 0.0;
  profile.peak_layer = 0;
  for (const auto& m : profile.layers) {
    if (m.a_lin > profile.peak_a_lin) {
      profile.peak_a_lin = m.a_lin;
      profile.peak_layer = m.layer;
    }
  }
  bool any_mlp = false;
  double peak_mlp = 0.0;
  for (const auto& m : profile.layers) {
    if (m.a_mlp) {
      any_mlp = true;
      peak_mlp = std::max(peak_mlp, *m.a_mlp);
    }
  }
  if (any_mlp) {
    profile.peak_a_mlp = peak_mlp;
    profile.crystallization =
        crystallization_gap(profile, options.mlp_thresh, options.lin_thresh);
  }
  profile.regime = classify_regime(profile, options.mlp_thresh, options.lin_go);
  return profile;
}

}  // namespace lap
