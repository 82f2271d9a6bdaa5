#pragma once
// Per-layer accessibility profile: lens accuracy through the model's own
// readout (a_lin), trained residual-probe accuracy (a_mlp) and the gap
// between them, perturbation sensitivity (lambda), crystallization gap and
// regime classification.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lap/model.hpp"

namespace lap {

struct LayerMetrics {
  int layer = 0;
  double a_lin = 0.0;
  std::optional<double> a_mlp;        // full-family accuracy
  std::optional<double> delta;        // a_mlp - a_lin
  std::optional<double> lambda;
  std::optional<double> a_mlp_train;  // train-split accuracy
  std::optional<double> a_mlp_heldout;
  std::optional<double> acc_a;        // a_lin on prompts the model gets right
  std::optional<double> acc_b;        // ... and on the complement
};

struct CrystallizationGap {
  std::optional<int> mlp_layer;          // first layer with a_mlp > mlp_thresh
  std::optional<int> lin_layer;          // first layer with a_lin > lin_thresh
  std::optional<int> gap_layers;         // lin_layer - mlp_layer
  std::optional<double> gap_fraction;    // gap / depth, absent when co-emerge
  bool co_emerge = false;                // negative gap
  bool open_ended = false;               // a threshold was never crossed
};

// 1: concept not represented (peak a_mlp below threshold)
// 2: represented but not output-aligned (difference-of-means will fail)
// 3: output-aligned (steering viable)
enum class Regime {
  undetermined = 0,
  not_represented = 1,
  not_output_aligned = 2,
  output_aligned = 3,
};
int regime_number(Regime r);

struct LapProfile {
  std::string model_id;
  std::string family_id;
  std::vector<LayerMetrics> layers;
  double peak_a_lin = 0.0;
  int peak_layer = 0;  // smallest layer attaining the peak
  std::optional<double> peak_a_mlp;
  CrystallizationGap crystallization;
  Regime regime = Regime::undetermined;
  // The final layer reproduces the model's own output by construction; a
  // profile peaking there says "already decided", not "steer here".
  int final_layer = 0;
};

// Fraction of prompts whose readout argmax at `layer` equals the answer
// token. Ties resolve to the lowest token id.
double a_lin(const ModelHandle& model, const ActivationCapture& capture, int layer);

// a_lin restricted to prompts the model answers correctly (first) and to the
// complement (second); nullopt on an empty subset.
std::pair<std::optional<double>, std::optional<double>> accuracy_split(
    const ModelHandle& model, const ActivationCapture& capture, int layer);

// ---- residual probe ----------------------------------------------------------

struct ProbeConfig {
  int hidden_width = 512;
  double dropout = 0.1;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  int batch_size = 256;
  int max_epochs = 50;
  int patience = 5;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

// Two-stage residual correction applied before the frozen readout:
// normalize -> widen -> GELU -> dropout -> project back -> dropout, with the
// final projection zero-initialized so the untrained probe is the identity.
struct TrainedProbe {
  int layer = -1;
  std::uint64_t capture_key = 0;
  int dim = 0;
  int hidden = 0;
  std::vector<double> ln_gain, ln_bias;
  std::vector<double> w1, b1;  // [hidden][d], [hidden]
  std::vector<double> w2, b2;  // [d][hidden], [d]
  std::vector<int> train_indices, heldout_indices;
  int best_epoch = -1;
  double best_heldout_loss = 0.0;
  std::vector<double> epoch_train_loss, epoch_heldout_loss;
  bool trained = false;

  // Correction f(h), evaluation mode (no dropout).
  std::vector<double> correction(std::span<const double> h) const;
};

// Zero-initialized probe; a_mlp of this equals a_lin exactly.
TrainedProbe make_identity_probe(const ModelHandle& model,
                                 const ActivationCapture& capture, int layer,
                                 const ProbeConfig& config = {});

// Cross-entropy training against the answer token through the frozen
// readout, early-stopped on held-out loss. Deterministic given config.seed.
TrainedProbe train_residual_probe(const ModelHandle& model,
                                  const ActivationCapture& capture, int layer,
                                  const ProbeConfig& config = {});

struct ProbeAccuracy {
  double full = 0.0;
  double train = 0.0;
  std::optional<double> heldout;
};

// Accuracy of readout(h + f(h)); `full` is over the whole family.
ProbeAccuracy a_mlp_detail(const ModelHandle& model,
                           const ActivationCapture& capture,
                           const TrainedProbe& probe, int layer);
double a_mlp(const ModelHandle& model, const ActivationCapture& capture,
             const TrainedProbe& probe, int layer);

// ---- perturbation sensitivity -------------------------------------------------

// Mean over K random unit directions (one independent set per prompt) of
// |f(h + a*eps) - f(h)| / a with a = alpha_frac * |h|, f the forward pass
// from `layer` to output logits; averaged over prompts. Prompts with a zero
// state are skipped and counted in *skipped_out.
double perturbation_sensitivity(const ModelHandle& model,
                                const ActivationCapture& capture, int layer,
                                int k = 10, double alpha_frac = 0.01,
                                std::uint64_t seed = 0, int* skipped_out = nullptr);

// ---- profile assembly ----------------------------------------------------------

struct ProfileOptions {
  bool probes = false;
  bool lambda = false;
  bool acc_split = true;
  ProbeConfig probe;
  int lambda_k = 10;
  double lambda_alpha_frac = 0.01;
  std::uint64_t seed = 0;
  double mlp_thresh = 0.5;
  double lin_thresh = 0.1;
  double lin_go = 0.1;
};

LapProfile lap_profile(const ModelHandle& model, const ActivationCapture& capture,
                       const ProfileOptions& options = {});

CrystallizationGap crystallization_gap(const LapProfile& profile,
                                       double mlp_thresh = 0.5,
                                       double lin_thresh = 0.1);
// Series form used for digitized profiles; values indexed by layer.
CrystallizationGap crystallization_gap_series(std::span<const double> a_mlp_series,
                                              std::span<const double> a_lin_series,
                                              double mlp_thresh = 0.5,
                                              double lin_thresh = 0.1);

Regime classify_regime(const LapProfile& profile, double mlp_thresh = 0.5,
                       double lin_go = 0.1);

}  // namespace lap
