#include <algorithm>

#include "lap/diagnosis.hpp"
#include "lap/error.hpp"

namespace lap {

const char* layer_policy_name(LayerPolicy p) {
  switch (p) {
    case LayerPolicy::lap: return "lap";
    case LayerPolicy::penultimate: return "penultimate";
    case LayerPolicy::pct90: return "pct90";
    case LayerPolicy::trained_probe: return "trained_probe";
  }
  return "?";
}

LayerPolicy layer_policy_from_name(const std::string& name) {
  if (name == "lap") return LayerPolicy::lap;
  if (name == "penultimate") return LayerPolicy::penultimate;
  if (name == "pct90") return LayerPolicy::pct90;
  if (name == "trained_probe") return LayerPolicy::trained_probe;
  throw usage_error("unknown layer policy: " + name);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::go: return "go";
    case Verdict::no_go: return "no_go";
    case Verdict::uncertain: return "uncertain";
  }
  return "?";
}

int recommend_layer(const LapProfile& profile, LayerPolicy policy,
                    std::span<const double> probe_accuracy) {
  const int depth = int(profile.layers.size());
  if (depth == 0) throw data_error("recommend_layer: empty profile");

  switch (policy) {
    case LayerPolicy::lap: {
      if (depth < 2)
        throw data_error("recommend_layer: lap policy needs at least 2 layers");
      int best = 0;
      for (int l = 1; l < depth - 1; ++l)
        if (profile.layers[std::size_t(l)].a_lin > profile.layers[std::size_t(best)].a_lin)
          best = l;
      return profile.layers[std::size_t(best)].layer;
    }
    case LayerPolicy::penultimate: {
      if (depth < 2)
        throw data_error("recommend_layer: penultimate policy needs at least 2 layers");
      return profile.layers[std::size_t(depth - 2)].layer;
    }
    case LayerPolicy::pct90: {
      double peak = 0.0;
      for (const auto& m : profile.layers) peak = std::max(peak, m.a_lin);
      const double cut = 0.9 * peak;
      for (const auto& m : profile.layers)
        if (m.a_lin >= cut) return m.layer;
      return profile.layers.back().layer;
    }
    case LayerPolicy::trained_probe: {
      if (probe_accuracy.size() != std::size_t(depth))
        throw data_error(
            "recommend_layer: trained_probe policy needs one accuracy per layer");
      int best = 0;
      for (int l = 1; l < depth; ++l)
        if (probe_accuracy[std::size_t(l)] > probe_accuracy[std::size_t(best)]) best = l;
      return profile.layers[std::size_t(best)].layer;
    }
  }
  throw data_error("recommend_layer: unknown policy");
}

Verdict go_no_go(const LapProfile& profile, double lo, double hi) {
  if (profile.peak_a_lin < lo) return Verdict::no_go;
  if (profile.peak_a_lin > hi) return Verdict::go;
  return Verdict::uncertain;
}

Diagnosis make_diagnosis(const LapProfile& profile, LayerPolicy policy,
                         const SteeringContext& steering, double lo, double hi) {
  Diagnosis d;
  d.family_id = profile.family_id;
  d.verdict = go_no_go(profile, lo, hi);
  d.peak_a_lin = profile.peak_a_lin;
  d.peak_layer = profile.peak_layer;
  d.policy = policy;
  d.recommended_layer = recommend_layer(profile, policy);
  d.regime = profile.regime;
  if (steering.baseline_p && *steering.baseline_p > 0.3)
    d.warnings.push_back("baseline target probability already high (" +
                         std::to_string(*steering.baseline_p) +
                         "); little headroom for steering");
  if (steering.n_target && *steering.n_target < 10)
    d.warnings.push_back("steering target has only " +
                         std::to_string(*steering.n_target) + " prompts");
  return d;
}

}  // namespace lap
