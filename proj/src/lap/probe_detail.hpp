#pragma once
// Internal probe machinery shared between the trainer and its tests.

#include <vector>

#include "lap/lap.hpp"
#include "lap/rng.hpp"

namespace lap::probe_detail {

struct BatchWork {
  std::vector<double> x, xn, y0, z1, a1, d1, z2, d2, hhat, trans, normed, logits;
  std::vector<double> m1, m2;  // dropout keep masks (already scaled)
  std::vector<double> dlogits, dnormed, dtrans, dhhat, dz2, dd1, dz1, dy0;
};

struct Grads {
  std::vector<double> ln_gain, ln_bias, w1, b1, w2, b2;
  void zero_like(const TrainedProbe& p) {
    ln_gain.assign(p.ln_gain.size(), 0.0);
    ln_bias.assign(p.ln_bias.size(), 0.0);
    w1.assign(p.w1.size(), 0.0);
    b1.assign(p.b1.size(), 0.0);
    w2.assign(p.w2.size(), 0.0);
    b2.assign(p.b2.size(), 0.0);
  }
};

// Forward through probe + frozen readout over a [B x d] batch; returns the
// mean cross-entropy loss. When grads is non-null, accumulates parameter
// gradients of the mean loss.
double batch_pass(const TrainedProbe& p, const ModelHandle& model,
                  const std::vector<double>& states, const std::vector<int>& answers,
                  bool train_mode, Rng* mask_rng, const ProbeConfig& cfg,
                  BatchWork& w, Grads* grads);

}  // namespace lap::probe_detail
