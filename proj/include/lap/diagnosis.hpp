#pragma once
// Practitioner-facing decisions: layer selection policies, go/no-go
// verdicts, the trained logistic-probe baseline, and failure-mode
// clustering with a signature-based taxonomy.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lap/lap.hpp"
#include "lap/steering.hpp"

namespace lap {

enum class LayerPolicy { lap, penultimate, pct90, trained_probe };
const char* layer_policy_name(LayerPolicy p);
LayerPolicy layer_policy_from_name(const std::string& name);

// lap: argmax a_lin over layers 0..L-2 (final layer excluded).
// penultimate: fixed L-2. pct90: first layer reaching 90% of peak a_lin.
// trained_probe: argmax of the supplied per-layer probe accuracy.
// Ties resolve to the smallest layer.
int recommend_layer(const LapProfile& profile, LayerPolicy policy,
                    std::span<const double> probe_accuracy = {});

enum class Verdict { no_go, uncertain, go };
const char* verdict_name(Verdict v);

Verdict go_no_go(const LapProfile& profile, double lo = 0.05, double hi = 0.1);

struct Diagnosis {
  std::string family_id;
  Verdict verdict = Verdict::uncertain;
  double peak_a_lin = 0.0;
  int peak_layer = 0;
  int recommended_layer = 0;
  LayerPolicy policy = LayerPolicy::lap;
  Regime regime = Regime::undetermined;
  std::vector<std::string> warnings;
};

struct SteeringContext {
  std::optional<double> baseline_p;  // unsteered target probability
  std::optional<int> n_target;
};

Diagnosis make_diagnosis(const LapProfile& profile, LayerPolicy policy,
                         const SteeringContext& steering = {}, double lo = 0.05,
                         double hi = 0.1);

// ---- logistic-probe baseline ---------------------------------------------------

struct LogisticConfig {
  double l2 = 1e-3;
  int folds = 5;
  int epochs = 300;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
};

// Per-layer stratified k-fold cross-validated accuracy of an L2 logistic
// classifier on raw states for the target / non-target split.
std::vector<double> trained_probe_baseline(const ActivationCapture& capture,
                                           const SteeringSpec& spec,
                                           const std::vector<int>& layers,
                                           const LogisticConfig& config = {});

// ---- failure analysis ----------------------------------------------------------

constexpr int kFailureFeatureCount = 5;
// feature order: projection, lambda, centroid distance, steered target rank,
// baseline target probability
extern const char* const kFailureFeatureNames[kFailureFeatureCount];

struct FailureAnalysis {
  int layer = -1;
  double scale = 1.0;
  std::vector<int> failed_items;   // capture indices of failed non-target prompts
  std::vector<int> success_items;  // non-target prompts the steering flipped
  std::vector<std::array<double, kFailureFeatureCount>> raw;  // per failed prompt
  std::vector<std::array<double, kFailureFeatureCount>> standardized;
  std::array<double, kFailureFeatureCount> success_mean{};
  std::array<double, kFailureFeatureCount> success_std{};
  bool has_success_stats = false;
};

// Steer every non-target prompt at `layer`; failed = steered argmax is not
// the target token. Features are computed per failed prompt and
// standardized over the failed set.
FailureAnalysis failure_features(const ModelHandle& model,
                                 const ActivationCapture& capture,
                                 const SteeringSpec& spec, int layer,
                                 double scale = 1.0, int lambda_k = 10,
                                 std::uint64_t seed = 0);

enum class FailureLabel {
  wrong_direction,
  indistinguishable,
  chaotic,
  low_engagement,
  unlabeled,
};
const char* failure_label_name(FailureLabel l);

struct FailureCluster {
  int cluster_id = 0;
  double silhouette = 0.0;  // of the chosen clustering as a whole
  std::vector<int> members;  // capture indices
  std::array<double, kFailureFeatureCount> centroid{};  // standardized space
  std::array<double, kFailureFeatureCount> mean_raw{};
  FailureLabel label = FailureLabel::unlabeled;
};

struct FailureReport {
  int n_failed = 0;
  int k = 0;
  double silhouette = 0.0;
  std::vector<std::pair<int, double>> silhouette_by_k;
  std::vector<FailureCluster> clusters;
};

struct ClusterOptions {
  int k_min = 2;
  int k_max = 5;
  int restarts = 10;
  std::uint64_t seed = 0;
};

// k-means over the standardized features, k chosen by mean silhouette;
// fewer than 3 failures collapse to a single unlabeled cluster.
FailureReport cluster_failures(const FailureAnalysis& analysis,
                               const ClusterOptions& options = {});

// ---- small reusable pieces (exposed for testing) --------------------------------

struct KMeansResult {
  std::vector<int> assignment;
  std::vector<std::vector<double>> centroids;
  double objective = 0.0;  // within-cluster sum of squares
};

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    int restarts, std::uint64_t seed);
double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& assignment, int k);
double percentile(std::vector<double> values, double q);  // q in [0, 100]

}  // namespace lap
