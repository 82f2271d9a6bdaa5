#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/lap.hpp"
#include "lap/rng.hpp"
#include "probe_detail.hpp"

namespace lap {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double gelu(double z) { return 0.5 * z * (1.0 + std::erf(z / kSqrt2)); }
double gelu_grad(double z) {
  const double phi = 0.5 * (1.0 + std::erf(z / kSqrt2));
  return phi + z * kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

struct Adam {
  std::vector<double> m, v;
  explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
  void step(std::vector<double>& w, const std::vector<double>& g, int t,
            const ProbeConfig& cfg) {
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    const double bc1 = 1.0 - std::pow(b1, t);
    const double bc2 = 1.0 - std::pow(b2, t);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double grad = g[i] + cfg.weight_decay * w[i];
      m[i] = b1 * m[i] + (1.0 - b1) * grad;
      v[i] = b2 * v[i] + (1.0 - b2) * grad * grad;
      w[i] -= cfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
  }
};

// probe layernorm, row of length d
void probe_ln_forward(const TrainedProbe& p, const double* x, double* xn, double* y) {
  const int d = p.dim;
  double mean = 0.0;
  for (int i = 0; i < d; ++i) mean += x[i];
  mean /= d;
  double var = 0.0;
  for (int i = 0; i < d; ++i) var += (x[i] - mean) * (x[i] - mean);
  var /= d;
  const double inv = 1.0 / std::sqrt(var + kLnEps);
  for (int i = 0; i < d; ++i) {
    xn[i] = (x[i] - mean) * inv;
    y[i] = p.ln_gain[std::size_t(i)] * xn[i] + p.ln_bias[std::size_t(i)];
  }
}

// backprop through the model's final norm: given the pre-norm input t and
// d(loss)/d(normed), produce d(loss)/dt
void final_norm_backward(const FinalNorm& norm, const double* t, const double* dn,
                         double* dt, int d) {
  switch (norm.kind) {
    case NormKind::identity: {
      for (int i = 0; i < d; ++i) dt[i] = dn[i];
      return;
    }
    case NormKind::rmsnorm: {
      double ms = 0.0;
      for (int i = 0; i < d; ++i) ms += t[i] * t[i];
      ms /= d;
      const double r = 1.0 / std::sqrt(ms + norm.eps);
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        const double g = norm.gain.empty() ? 1.0 : norm.gain[std::size_t(i)];
        s += dn[i] * g * t[i];
      }
      const double c = r * r * r * s / d;
      for (int i = 0; i < d; ++i) {
        const double g = norm.gain.empty() ? 1.0 : norm.gain[std::size_t(i)];
        dt[i] = r * g * dn[i] - c * t[i];
      }
      return;
    }
    case NormKind::layernorm: {
      double mean = 0.0;
      for (int i = 0; i < d; ++i) mean += t[i];
      mean /= d;
      double var = 0.0;
      for (int i = 0; i < d; ++i) var += (t[i] - mean) * (t[i] - mean);
      var /= d;
      const double inv = 1.0 / std::sqrt(var + norm.eps);
      double mq = 0.0, mqx = 0.0;
      std::vector<double> q((std::size_t(d))), xn((std::size_t(d)));
      for (int i = 0; i < d; ++i) {
        const double g = norm.gain.empty() ? 1.0 : norm.gain[std::size_t(i)];
        q[std::size_t(i)] = dn[i] * g;
        xn[std::size_t(i)] = (t[i] - mean) * inv;
        mq += q[std::size_t(i)];
        mqx += q[std::size_t(i)] * xn[std::size_t(i)];
      }
      mq /= d;
      mqx /= d;
      for (int i = 0; i < d; ++i)
        dt[i] = inv * (q[std::size_t(i)] - mq - xn[std::size_t(i)] * mqx);
      return;
    }
  }
}

std::uint64_t probe_key(const ActivationCapture& capture) { return capture.content_key(); }

void fill_states_f64(const ActivationCapture& capture, int layer,
                     const std::vector<int>& idx, std::vector<double>& out) {
  const int d = capture.hidden_dim;
  out.resize(idx.size() * std::size_t(d));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    std::span<const float> s = capture.state(layer, idx[r]);
    for (int i = 0; i < d; ++i) out[r * std::size_t(d) + std::size_t(i)] = double(s[std::size_t(i)]);
  }
}

}  // namespace

double probe_detail::batch_pass(const TrainedProbe& p, const ModelHandle& model,
                                const std::vector<double>& states,
                                const std::vector<int>& answers, bool train_mode,
                                Rng* mask_rng, const ProbeConfig& cfg,
                                probe_detail::BatchWork& w,
                                probe_detail::Grads* grads) {
  const ReadoutSpec& spec = model.readout();
  const int d = p.dim;
  const int hid = p.hidden;
  const int V = spec.vocab;
  const std::size_t B = answers.size();
  const double keep = 1.0 - cfg.dropout;

  w.x = states;
  w.xn.resize(B * std::size_t(d));
  w.y0.resize(B * std::size_t(d));
  for (std::size_t r = 0; r < B; ++r)
    probe_ln_forward(p, w.x.data() + r * std::size_t(d), w.xn.data() + r * std::size_t(d),
                     w.y0.data() + r * std::size_t(d));

  w.z1.resize(B * std::size_t(hid));
  kernels::gemm_abt_f64(w.y0.data(), B, std::size_t(d), p.w1.data(), std::size_t(hid),
                        w.z1.data(), false);
  for (std::size_t r = 0; r < B; ++r)
    for (int i = 0; i < hid; ++i) w.z1[r * std::size_t(hid) + std::size_t(i)] += p.b1[std::size_t(i)];

  w.a1.resize(w.z1.size());
  for (std::size_t i = 0; i < w.z1.size(); ++i) w.a1[i] = gelu(w.z1[i]);

  w.d1 = w.a1;
  if (train_mode && cfg.dropout > 0.0) {
    w.m1.resize(w.a1.size());
    for (std::size_t i = 0; i < w.m1.size(); ++i)
      w.m1[i] = (mask_rng->uniform() < cfg.dropout) ? 0.0 : 1.0 / keep;
    for (std::size_t i = 0; i < w.d1.size(); ++i) w.d1[i] *= w.m1[i];
  }

  w.z2.resize(B * std::size_t(d));
  kernels::gemm_abt_f64(w.d1.data(), B, std::size_t(hid), p.w2.data(), std::size_t(d),
                        w.z2.data(), false);
  for (std::size_t r = 0; r < B; ++r)
    for (int i = 0; i < d; ++i) w.z2[r * std::size_t(d) + std::size_t(i)] += p.b2[std::size_t(i)];

  w.d2 = w.z2;
  if (train_mode && cfg.dropout > 0.0) {
    w.m2.resize(w.z2.size());
    for (std::size_t i = 0; i < w.m2.size(); ++i)
      w.m2[i] = (mask_rng->uniform() < cfg.dropout) ? 0.0 : 1.0 / keep;
    for (std::size_t i = 0; i < w.d2.size(); ++i) w.d2[i] *= w.m2[i];
  }

  w.hhat.resize(B * std::size_t(d));
  for (std::size_t i = 0; i < w.hhat.size(); ++i) w.hhat[i] = w.x[i] + w.d2[i];

  // frozen readout: optional per-layer translator, final norm, unembedding
  if (spec.translator) {
    w.trans.resize(B * std::size_t(d));
    for (std::size_t r = 0; r < B; ++r) {
      std::span<const double> in(w.hhat.data() + r * std::size_t(d), std::size_t(d));
      std::span<double> out(w.trans.data() + r * std::size_t(d), std::size_t(d));
      spec.translator->apply(p.layer, in, out);
    }
  } else {
    w.trans = w.hhat;
  }
  w.normed.resize(B * std::size_t(d));
  for (std::size_t r = 0; r < B; ++r) {
    std::span<const double> in(w.trans.data() + r * std::size_t(d), std::size_t(d));
    std::span<double> out(w.normed.data() + r * std::size_t(d), std::size_t(d));
    spec.norm.apply_f64(in, out);
  }
  w.logits.resize(B * std::size_t(V));
  kernels::gemm_abt_f64(w.normed.data(), B, std::size_t(d), spec.unembedding_f64.data(),
                        std::size_t(V), w.logits.data(), false);

  // cross-entropy (optimizes pre-cap logits when a softcap is configured)
  double loss = 0.0;
  w.dlogits.assign(B * std::size_t(V), 0.0);
  for (std::size_t r = 0; r < B; ++r) {
    double* row = w.logits.data() + r * std::size_t(V);
    const int target = answers[r];
    double mx = row[0];
    for (int i = 1; i < V; ++i) mx = std::max(mx, row[i]);
    double sum = 0.0;
    for (int i = 0; i < V; ++i) sum += std::exp(row[i] - mx);
    const double lse = mx + std::log(sum);
    loss += lse - row[target];
    if (grads) {
      double* drow = w.dlogits.data() + r * std::size_t(V);
      for (int i = 0; i < V; ++i) drow[i] = std::exp(row[i] - lse) / double(B);
      drow[target] -= 1.0 / double(B);
    }
  }
  loss /= double(B);
  if (!grads) return loss;

  // backward
  w.dnormed.resize(B * std::size_t(d));
  kernels::gemm_f64(w.dlogits.data(), B, std::size_t(V), spec.unembedding_f64.data(),
                    std::size_t(d), w.dnormed.data(), false);
  w.dtrans.resize(B * std::size_t(d));
  for (std::size_t r = 0; r < B; ++r)
    final_norm_backward(spec.norm, w.trans.data() + r * std::size_t(d),
                        w.dnormed.data() + r * std::size_t(d),
                        w.dtrans.data() + r * std::size_t(d), d);
  if (spec.translator) {
    const double* tw = spec.translator->weight.data() +
                       std::size_t(p.layer) * std::size_t(d) * std::size_t(d);
    w.dhhat.resize(B * std::size_t(d));
    kernels::gemm_f64(w.dtrans.data(), B, std::size_t(d), tw, std::size_t(d),
                      w.dhhat.data(), false);
  } else {
    w.dhhat = w.dtrans;
  }

  w.dz2 = w.dhhat;
  if (train_mode && cfg.dropout > 0.0)
    for (std::size_t i = 0; i < w.dz2.size(); ++i) w.dz2[i] *= w.m2[i];

  kernels::gemm_atb_acc_f64(w.dz2.data(), B, std::size_t(d), w.d1.data(),
                            std::size_t(hid), grads->w2.data());
  for (std::size_t r = 0; r < B; ++r)
    for (int i = 0; i < d; ++i)
      grads->b2[std::size_t(i)] += w.dz2[r * std::size_t(d) + std::size_t(i)];

  w.dd1.resize(B * std::size_t(hid));
  kernels::gemm_f64(w.dz2.data(), B, std::size_t(d), p.w2.data(), std::size_t(hid),
                    w.dd1.data(), false);
  w.dz1 = w.dd1;
  if (train_mode && cfg.dropout > 0.0)
    for (std::size_t i = 0; i < w.dz1.size(); ++i) w.dz1[i] *= w.m1[i];
  for (std::size_t i = 0; i < w.dz1.size(); ++i) w.dz1[i] *= gelu_grad(w.z1[i]);

  kernels::gemm_atb_acc_f64(w.dz1.data(), B, std::size_t(hid), w.y0.data(),
                            std::size_t(d), grads->w1.data());
  for (std::size_t r = 0; r < B; ++r)
    for (int i = 0; i < hid; ++i)
      grads->b1[std::size_t(i)] += w.dz1[r * std::size_t(hid) + std::size_t(i)];

  w.dy0.resize(B * std::size_t(d));
  kernels::gemm_f64(w.dz1.data(), B, std::size_t(hid), p.w1.data(), std::size_t(d),
                    w.dy0.data(), false);
  for (std::size_t r = 0; r < B; ++r) {
    const double* dy0 = w.dy0.data() + r * std::size_t(d);
    const double* xn = w.xn.data() + r * std::size_t(d);
    for (int i = 0; i < d; ++i) {
      grads->ln_gain[std::size_t(i)] += dy0[i] * xn[i];
      grads->ln_bias[std::size_t(i)] += dy0[i];
    }
  }
  return loss;
}

namespace {

TrainedProbe init_probe(const ModelHandle& model, const ActivationCapture& capture,
                        int layer, const ProbeConfig& cfg) {
  cfg.validate();
  if (layer < 0 || layer >= capture.num_layers)
    throw data_error("probe: layer out of range");
  TrainedProbe p;
  p.layer = layer;
  p.capture_key = probe_key(capture);
  p.dim = capture.hidden_dim;
  p.hidden = cfg.hidden_width;
  p.ln_gain.assign(std::size_t(p.dim), 1.0);
  p.ln_bias.assign(std::size_t(p.dim), 0.0);
  p.b1.assign(std::size_t(p.hidden), 0.0);
  // zero-initialized output projection: the untrained probe is the identity
  p.w2.assign(std::size_t(p.dim) * std::size_t(p.hidden), 0.0);
  p.b2.assign(std::size_t(p.dim), 0.0);
  Rng init(derive_seed(cfg.seed, "probe-init", std::uint64_t(layer)));
  const double std1 = std::sqrt(2.0 / double(p.dim));
  p.w1.resize(std::size_t(p.hidden) * std::size_t(p.dim));
  for (auto& v : p.w1) v = init.gaussian() * std1;
  (void)model;
  return p;
}

}  // namespace

void ProbeConfig::validate() const {
  if (hidden_width < 1 || batch_size < 1 || max_epochs < 1 || patience < 0)
    throw data_error("probe config: sizes must be positive");
  if (dropout < 0.0 || dropout >= 1.0)
    throw data_error("probe config: dropout must be in [0, 1)");
  if (learning_rate <= 0.0 || weight_decay < 0.0)
    throw data_error("probe config: bad optimizer settings");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw data_error("probe config: train_fraction must be in (0, 1)");
}

std::vector<double> TrainedProbe::correction(std::span<const double> h) const {
  if (int(h.size()) != dim) throw data_error("probe correction: dimension mismatch");
  std::vector<double> xn((std::size_t(dim))), y0((std::size_t(dim)));
  probe_ln_forward(*this, h.data(), xn.data(), y0.data());
  std::vector<double> z1((std::size_t(hidden)));
  kernels::matvec_f64(w1.data(), std::size_t(hidden), std::size_t(dim), y0.data(),
                      z1.data());
  for (int i = 0; i < hidden; ++i) z1[std::size_t(i)] = gelu(z1[std::size_t(i)] + b1[std::size_t(i)]);
  std::vector<double> out((std::size_t(dim)));
  kernels::matvec_f64(w2.data(), std::size_t(dim), std::size_t(hidden), z1.data(),
                      out.data());
  for (int i = 0; i < dim; ++i) out[std::size_t(i)] += b2[std::size_t(i)];
  return out;
}

TrainedProbe make_identity_probe(const ModelHandle& model,
                                 const ActivationCapture& capture, int layer,
                                 const ProbeConfig& config) {
  return init_probe(model, capture, layer, config);
}

TrainedProbe train_residual_probe(const ModelHandle& model,
                                  const ActivationCapture& capture, int layer,
                                  const ProbeConfig& config) {
  TrainedProbe p = init_probe(model, capture, layer, config);

  const int n = capture.num_prompts();
  std::vector<int> order((std::size_t(n)));
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(derive_seed(config.seed, "probe-split", std::uint64_t(layer)));
  split_rng.shuffle(order);
  const int n_train = int(double(n) * config.train_fraction);
  if (n_train < 10)
    throw data_error("probe: " + std::to_string(n_train) +
                     " training items after split; need at least 10");
  p.train_indices.assign(order.begin(), order.begin() + n_train);
  p.heldout_indices.assign(order.begin() + n_train, order.end());
  if (p.heldout_indices.empty())
    throw data_error("probe: empty held-out split");

  std::vector<double> train_states, held_states;
  fill_states_f64(capture, layer, p.train_indices, train_states);
  fill_states_f64(capture, layer, p.heldout_indices, held_states);
  std::vector<int> train_answers, held_answers;
  for (int i : p.train_indices) train_answers.push_back(capture.answer_token_ids[std::size_t(i)]);
  for (int i : p.heldout_indices) held_answers.push_back(capture.answer_token_ids[std::size_t(i)]);

  const int d = p.dim;
  Adam opt_ln_gain{p.ln_gain.size()}, opt_ln_bias{p.ln_bias.size()};
  Adam opt_w1{p.w1.size()}, opt_b1{p.b1.size()}, opt_w2{p.w2.size()}, opt_b2{p.b2.size()};

  TrainedProbe best = p;
  double best_loss = std::numeric_limits<double>::infinity();
  int best_epoch = -1;
  int since_best = 0;
  int adam_t = 0;
  probe_detail::BatchWork work;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::vector<int> idx(p.train_indices.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng shuffle_rng(derive_seed(config.seed, "probe-shuffle", std::uint64_t(layer),
                                std::uint64_t(epoch)));
    shuffle_rng.shuffle(idx);

    double epoch_loss = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < idx.size(); start += std::size_t(config.batch_size)) {
      const std::size_t end = std::min(idx.size(), start + std::size_t(config.batch_size));
      const std::size_t bsz = end - start;
      std::vector<double> bx(bsz * std::size_t(d));
      std::vector<int> by(bsz);
      for (std::size_t r = 0; r < bsz; ++r) {
        const int local = idx[start + r];
        const double* src = train_states.data() + std::size_t(local) * std::size_t(d);
        std::copy(src, src + d, bx.data() + r * std::size_t(d));
        by[r] = train_answers[std::size_t(local)];
      }
      Rng mask_rng(derive_seed(config.seed, "probe-dropout", std::uint64_t(layer),
                               std::uint64_t(epoch), start));
      probe_detail::Grads g;
      g.zero_like(p);
      const double loss = probe_detail::batch_pass(p, model, bx, by, true, &mask_rng,
                                                   config, work, &g);
      if (!std::isfinite(loss)) {
        std::string trace;
        for (std::size_t e = 0; e < p.epoch_train_loss.size(); ++e)
          trace += " epoch " + std::to_string(e) + ": " +
                   std::to_string(p.epoch_train_loss[e]);
        throw data_error("probe training diverged (non-finite loss) at epoch " +
                         std::to_string(epoch) + ";" + trace);
      }
      epoch_loss += loss;
      ++batches;
      ++adam_t;
      opt_ln_gain.step(p.ln_gain, g.ln_gain, adam_t, config);
      opt_ln_bias.step(p.ln_bias, g.ln_bias, adam_t, config);
      opt_w1.step(p.w1, g.w1, adam_t, config);
      opt_b1.step(p.b1, g.b1, adam_t, config);
      opt_w2.step(p.w2, g.w2, adam_t, config);
      opt_b2.step(p.b2, g.b2, adam_t, config);
    }
    p.epoch_train_loss.push_back(epoch_loss / std::max(1, batches));

    const double held_loss = probe_detail::batch_pass(
        p, model, held_states, held_answers, false, nullptr, config, work, nullptr);
    p.epoch_heldout_loss.push_back(held_loss);
    if (!std::isfinite(held_loss))
      throw data_error("probe training diverged (non-finite held-out loss) at epoch " +
                       std::to_string(epoch));
    if (held_loss < best_loss) {
      best_loss = held_loss;
      best_epoch = epoch;
      since_best = 0;
      best.ln_gain = p.ln_gain;
      best.ln_bias = p.ln_bias;
      best.w1 = p.w1;
      best.b1 = p.b1;
      best.w2 = p.w2;
      best.b2 = p.b2;
    } else if (++since_best > config.patience) {
      break;
    }
  }

  best.train_indices = p.train_indices;
  best.heldout_indices = p.heldout_indices;
  best.epoch_train_loss = p.epoch_train_loss;
  best.epoch_heldout_loss = p.epoch_heldout_loss;
  best.best_epoch = best_epoch;
  best.best_heldout_loss = best_loss;
  best.trained = true;
  return best;
}

namespace {

double probe_accuracy_subset(const ModelHandle& model, const ActivationCapture& capture,
                             const TrainedProbe& probe, int layer,
                             const std::vector<int>& subset) {
  if (subset.empty()) return 0.0;
  const int d = capture.hidden_dim;
  int hits = 0;
  for (int idx : subset) {
    std::span<const float> s = capture.state(layer, idx);
    std::vector<double> h(s.begin(), s.end());
    std::vector<double> f = probe.correction(h);
    std::vector<float> hhat((std::size_t(d)));
    for (int i = 0; i < d; ++i) hhat[std::size_t(i)] = float(h[std::size_t(i)] + f[std::size_t(i)]);
    std::vector<float> logits = readout_f32(model.readout(), hhat, layer);
    if (int(kernels::argmax_f32(logits.data(), logits.size())) ==
        capture.answer_token_ids[std::size_t(idx)])
      ++hits;
  }
  return double(hits) / double(subset.size());
}

}  // namespace

ProbeAccuracy a_mlp_detail(const ModelHandle& model, const ActivationCapture& capture,
                           const TrainedProbe& probe, int layer) {
  if (probe.layer != layer)
    throw data_error("a_mlp: probe was trained for layer " + std::to_string(probe.layer) +
                     ", not " + std::to_string(layer));
  if (probe.capture_key != capture.content_key())
    throw data_error("a_mlp: probe does not belong to this capture");
  ProbeAccuracy acc;
  std::vector<int> all(std::size_t(capture.num_prompts()));
  std::iota(all.begin(), all.end(), 0);
  acc.full = probe_accuracy_subset(model, capture, probe, layer, all);
  if (!probe.train_indices.empty())
    acc.train = probe_accuracy_subset(model, capture, probe, layer, probe.train_indices);
  else
    acc.train = acc.full;
  if (!probe.heldout_indices.empty())
    acc.heldout =
        probe_accuracy_subset(model, capture, probe, layer, probe.heldout_indices);
  return acc;
}

double a_mlp(const ModelHandle& model, const ActivationCapture& capture,
             const TrainedProbe& probe, int layer) {
  return a_mlp_detail(model, capture, probe, layer).full;
}

}  // namespace lap
