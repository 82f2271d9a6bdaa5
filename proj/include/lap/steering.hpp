#pragma once
// Difference-of-means steering: direction computation, injected resume,
// target-probability shift, collateral KL on unrelated prompts, efficiency,
// unembedding projection rank, separability, and layer x scale sweeps.

#include <optional>
#include <string>
#include <vector>

#include "lap/concepts.hpp"
#include "lap/model.hpp"

namespace lap {

struct SteeringDirection {
  std::string family_id;
  int layer = -1;
  std::vector<double> vector;  // length d
  double d_norm = 0.0;
  int n_target = 0;
  int n_nontarget = 0;

  std::vector<float> vector_f32() const {
    return std::vector<float>(vector.begin(), vector.end());
  }
};

struct SteeringResult {
  std::string family_id;
  int layer = -1;
  double scale = 1.0;
  double delta_p = 0.0;
  double baseline_p = 0.0;
  std::optional<double> kl_collateral;
  std::optional<double> efficiency;  // delta_p / kl when kl > eps
  int cd_target_rank = 0;            // 1-based; 0 when the direction is zero
  double cd_target_value = 0.0;
  double d_norm = 0.0;
  int n_target = 0;
  int n_nontarget = 0;
  std::vector<std::string> warnings;
};

// mean target-group state minus mean non-target-group state at `layer`.
SteeringDirection steering_direction(const ActivationCapture& capture,
                                     const SteeringSpec& spec, int layer);

// Resume each non-target prompt from `layer` with state + scale*direction;
// delta_p is the mean change in the target token's softmax probability.
SteeringResult measure_delta_p(const ModelHandle& model,
                               const ActivationCapture& capture,
                               const SteeringSpec& spec, int layer,
                               double scale = 1.0);

// Mean KL(unsteered || steered) of the next-token distribution over the
// given prompts, natural log.
double collateral_kl(const ModelHandle& model, const SteeringDirection& direction,
                     int layer, double scale,
                     const std::vector<std::string>& unrelated_prompts);

constexpr double kEfficiencyKlEps = 1e-6;
std::optional<double> steering_efficiency(double delta_p, double kl,
                                          double eps = kEfficiencyKlEps);

struct CdProjection {
  std::vector<double> logits;  // norm + unembedding only, no post-transform
  int target_rank = 0;         // 1-based, descending, ties by token id
  double target_value = 0.0;
};

CdProjection cd_projection(const ModelHandle& model,
                           const SteeringDirection& direction, int target_token_id);

// Accuracy of the one-dimensional threshold classifier on projections onto
// the direction, threshold at the midpoint of the group means, evaluated on
// all items. A zero direction scores 0.5 by convention (warning set).
double separability(const ActivationCapture& capture, const SteeringSpec& spec,
                    int layer, std::string* warning = nullptr);

struct SweepOptions {
  std::vector<std::string> unrelated_prompts;  // empty disables KL/efficiency
};

struct SweepResult {
  std::vector<SteeringResult> cells;  // ordered by (layer, scale)
  double max_delta_p = 0.0;
  int max_dp_layer = -1;
  double max_dp_scale = 0.0;
  bool has_max = false;
};

SweepResult steering_sweep(const ModelHandle& model, const ActivationCapture& capture,
                           const SteeringSpec& spec, const std::vector<int>& layers,
                           const std::vector<double>& scales,
                           const SweepOptions& options = {});

}  // namespace lap
