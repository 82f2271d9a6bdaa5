#include "lap/steering.hpp"

#include <algorithm>
#include <cmath>

#include "lap/error.hpp"
#include "lap/kernels.hpp"

namespace lap {

namespace {

void check_spec_against_capture(const ActivationCapture& capture,
                                const SteeringSpec& spec) {
  const int n = capture.num_prompts();
  for (int idx : spec.target_items)
    if (idx < 0 || idx >= n)
      throw data_error("steering spec indexes item " + std::to_string(idx) +
                       " outside the capture (N=" + std::to_string(n) + ")");
  for (int idx : spec.nontarget_items)
    if (idx < 0 || idx >= n)
      throw data_error("steering spec indexes item " + std::to_string(idx) +
                       " outside the capture (N=" + std::to_string(n) + ")");
}

double softmax_prob(const std::vector<double>& logits, int token) {
  double mx = logits[0];
  for (double l : logits) mx = std::max(mx, l);
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - mx);
  return std::exp(logits[std::size_t(token)] - mx) / sum;
}

std::vector<double> log_softmax(const std::vector<double>& logits) {
  double mx = logits[0];
  for (double l : logits) mx = std::max(mx, l);
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - mx);
  const double lse = mx + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

}  // namespace

SteeringDirection steering_direction(const ActivationCapture& capture,
                                     const SteeringSpec& spec, int layer) {
  if (layer < 0 || layer >= capture.num_layers)
    throw data_error("steering_direction: layer out of range");
  if (spec.target_items.empty() || spec.nontarget_items.empty())
    throw data_error("steering_direction: empty target or non-target group");
  check_spec_against_capture(capture, spec);

  const int d = capture.hidden_dim;
  std::vector<double> mean_t(std::size_t(d), 0.0), mean_nt(std::size_t(d), 0.0);
  for (int idx : spec.target_items) {
    std::span<const float> s = capture.state(layer, idx);
    for (int i = 0; i < d; ++i) mean_t[std::size_t(i)] += double(s[std::size_t(i)]);
  }
  for (int idx : spec.nontarget_items) {
    std::span<const float> s = capture.state(layer, idx);
    for (int i = 0; i < d; ++i) mean_nt[std::size_t(i)] += double(s[std::size_t(i)]);
  }
  SteeringDirection dir;
  dir.family_id = spec.family_id;
  dir.layer = layer;
  dir.n_target = spec.n_target();
  dir.n_nontarget = spec.n_nontarget();
  dir.vector.resize(std::size_t(d));
  for (int i = 0; i < d; ++i)
    dir.vector[std::size_t(i)] = mean_t[std::size_t(i)] / double(dir.n_target) -
                                 mean_nt[std::size_t(i)] / double(dir.n_nontarget);
  dir.d_norm = std::sqrt(kernels::sumsq_f64(dir.vector.data(), dir.vector.size()));
  return dir;
}

SteeringResult measure_delta_p(const ModelHandle& model,
                               const ActivationCapture& capture,
                               const SteeringSpec& spec, int layer, double scale) {
  SteeringDirection dir = steering_direction(capture, spec, layer);
  if (spec.target_token_id < 0)
    throw data_error("measure_delta_p: steering spec has no validated target token");

  SteeringResult res;
  res.family_id = spec.family_id;
  res.layer = layer;
  res.scale = scale;
  res.d_norm = dir.d_norm;
  res.n_target = dir.n_target;
  res.n_nontarget = dir.n_nontarget;
  if (spec.small_target_warning)
    res.warnings.push_back("steering target has fewer than 10 prompts");

  const int target = spec.target_token_id;
  double sum_dp = 0.0, sum_base = 0.0;
  int used = 0;
  for (int idx : spec.nontarget_items) {
    std::span<const float> s = capture.state(layer, idx);
    std::vector<double> h(s.begin(), s.end());
    std::vector<double> steered = h;
    kernels::axpy_f64(scale, dir.vector.data(), steered.data(), steered.size());
    try {
      const double p0 = softmax_prob(resume_logits_f64(model, layer, h), target);
      const double p1 = softmax_prob(resume_logits_f64(model, layer, steered), target);
      sum_base += p0;
      sum_dp += p1 - p0;
      ++used;
    } catch (const Error& e) {
      res.warnings.push_back("prompt " + std::to_string(idx) +
                             " excluded from delta_p: " + e.what());
    }
  }
  if (used == 0)
    throw data_error("measure_delta_p: every non-target prompt failed to resume");
  res.delta_p = sum_dp / double(used);
  res.baseline_p = sum_base / double(used);

  if (dir.d_norm > 0.0) {
    CdProjection cd = cd_projection(model, dir, target);
    res.cd_target_rank = cd.target_rank;
    res.cd_target_value = cd.target_value;
  } else {
    res.warnings.push_back("zero steering direction; projection rank undefined");
  }
  return res;
}

namespace {

ActivationCapture capture_unrelated(const ModelHandle& model,
                                    const std::vector<std::string>& prompts) {
  if (prompts.empty()) throw data_error("collateral_kl: empty unrelated prompt set");
  std::vector<PromptItem> items;
  items.reserve(prompts.size());
  for (const auto& text : prompts) items.push_back({text, "-", "", -1, ""});
  ActivationCapture cap = capture_activations(model, items, "unrelated");
  if (cap.num_prompts() == 0)
    throw data_error("collateral_kl: no unrelated prompt survived capture");
  return cap;
}

double collateral_kl_captured(const ModelHandle& model,
                              const SteeringDirection& direction, int layer,
                              double scale, const ActivationCapture& cap) {
  double total = 0.0;
  for (int p = 0; p < cap.num_prompts(); ++p) {
    std::span<const float> s = cap.state(layer, p);
    std::vector<double> h(s.begin(), s.end());
    std::vector<double> steered = h;
    kernels::axpy_f64(scale, direction.vector.data(), steered.data(), steered.size());
    const std::vector<double> lp = log_softmax(resume_logits_f64(model, layer, h));
    const std::vector<double> lq = log_softmax(resume_logits_f64(model, layer, steered));
    double kl = 0.0;
    for (std::size_t i = 0; i < lp.size(); ++i) kl += std::exp(lp[i]) * (lp[i] - lq[i]);
    if (!std::isfinite(kl))
      throw data_error("collateral_kl: non-finite divergence on prompt " +
                       std::to_string(p));
    total += kl;
  }
  return total / double(cap.num_prompts());
}

}  // namespace

double collateral_kl(const ModelHandle& model, const SteeringDirection& direction,
                     int layer, double scale,
                     const std::vector<std::string>& unrelated_prompts) {
  return collateral_kl_captured(model, direction, layer, scale,
                                capture_unrelated(model, unrelated_prompts));
}

std::optional<double> steering_efficiency(double delta_p, double kl, double eps) {
  if (kl > eps) return delta_p / kl;
  return std::nullopt;
}

CdProjection cd_projection(const ModelHandle& model, const SteeringDirection& direction,
                           int target_token_id) {
  if (direction.d_norm <= 0.0)
    throw data_error("cd_projection: zero steering direction");
  if (target_token_id < 0 || target_token_id >= model.vocab_size())
    throw data_error("cd_projection: target token out of range");
  CdProjection cd;
  cd.logits = project_direction_f64(model.readout(), direction.vector);
  cd.target_value = cd.logits[std::size_t(target_token_id)];
  int rank = 1;
  for (std::size_t v = 0; v < cd.logits.size(); ++v) {
    if (int(v) == target_token_id) continue;
    if (cd.logits[v] > cd.target_value ||
        (cd.logits[v] == cd.target_value && int(v) < target_token_id))
      ++rank;
  }
  cd.target_rank = rank;
  return cd;
}

double separability(const ActivationCapture& capture, const SteeringSpec& spec,
                    int layer, std::string* warning) {
  SteeringDirection dir = steering_direction(capture, spec, layer);
  if (dir.d_norm == 0.0) {
    if (warning) *warning = "zero steering direction; separability 0.5 by convention";
    return 0.5;
  }
  auto project = [&](int idx) {
    std::span<const float> s = capture.state(layer, idx);
    std::vector<double> h(s.begin(), s.end());
    return kernels::dot_f64(h.data(), dir.vector.data(), h.size());
  };
  double mean_t = 0.0, mean_nt = 0.0;
  for (int idx : spec.target_items) mean_t += project(idx);
  for (int idx : spec.nontarget_items) mean_nt += project(idx);
  mean_t /= double(spec.n_target());
  mean_nt /= double(spec.n_nontarget());
  const double threshold = 0.5 * (mean_t + mean_nt);
  const bool target_above = mean_t >= mean_nt;

  int correct = 0;
  for (int idx : spec.target_items) {
    const bool above = project(idx) >= threshold;
    if (above == target_above) ++correct;
  }
  for (int idx : spec.nontarget_items) {
    const bool above = project(idx) >= threshold;
    if (above != target_above) ++correct;
  }
  return double(correct) / double(spec.n_target() + spec.n_nontarget());
}

SweepResult steering_sweep(const ModelHandle& model, const ActivationCapture& capture,
                           const SteeringSpec& spec, const std::vector<int>& layers,
                           const std::vector<double>& scales,
                           const SweepOptions& options) {
  SweepResult sweep;
  std::optional<ActivationCapture> unrelated;
  if (!options.unrelated_prompts.empty())
    unrelated = capture_unrelated(model, options.unrelated_prompts);
  for (int layer : layers) {
    for (double scale : scales) {
      SteeringResult res = measure_delta_p(model, capture, spec, layer, scale);
      if (unrelated) {
        SteeringDirection dir = steering_direction(capture, spec, layer);
        const double kl = collateral_kl_captured(model, dir, layer, scale, *unrelated);
        res.kl_collateral = kl;
        res.efficiency = steering_efficiency(res.delta_p, kl);
      }
      if (!sweep.has_max || res.delta_p > sweep.max_delta_p) {
        sweep.max_delta_p = res.delta_p;
        sweep.max_dp_layer = layer;
        sweep.max_dp_scale = scale;
        sweep.has_max = true;
      }
      sweep.cells.push_back(std::move(res));
    }
  }
  return sweep;
}

}  // namespace lap
