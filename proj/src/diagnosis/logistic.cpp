#include <algorithm>
#include <cmath>
#include <numeric>

#include "lap/diagnosis.hpp"
#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/rng.hpp"

namespace lap {

namespace {

// full-batch Adam on L2-regularized logistic loss; returns weights (d+1 with
// trailing bias)
std::vector<double> fit_logistic(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y,
                                 const LogisticConfig& cfg) {
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();
  std::vector<double> w(d + 1, 0.0);
  std::vector<double> m(d + 1, 0.0), v(d + 1, 0.0);
  std::vector<double> grad(d + 1);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  for (int t = 1; t <= cfg.epochs; ++t) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double z =
          kernels::dot_f64(w.data(), x[i].data(), d) + w[d];
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double err = (p - double(y[i])) / double(n);
      kernels::axpy_f64(err, x[i].data(), grad.data(), d);
      grad[d] += err;
    }
    for (std::size_t j = 0; j < d; ++j) grad[j] += cfg.l2 * w[j] / double(n);
    const double bc1 = 1.0 - std::pow(b1, t);
    const double bc2 = 1.0 - std::pow(b2, t);
    for (std::size_t j = 0; j <= d; ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * grad[j];
      v[j] = b2 * v[j] + (1.0 - b2) * grad[j] * grad[j];
      w[j] -= cfg.learning_rate * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + eps);
    }
  }
  return w;
}

}  // namespace

std::vector<double> trained_probe_baseline(const ActivationCapture& capture,
                                           const SteeringSpec& spec,
                                           const std::vector<int>& layers,
                                           const LogisticConfig& config) {
  if (spec.n_target() < config.folds)
    throw data_error("trained_probe_baseline: target class smaller than fold count (" +
                     std::to_string(spec.n_target()) + " < " +
                     std::to_string(config.folds) + ")");
  if (spec.n_nontarget() < config.folds)
    throw data_error("trained_probe_baseline: non-target class smaller than fold count");

  // stratified folds: shuffle each class, deal round-robin
  std::vector<int> pos = spec.target_items;
  std::vector<int> neg = spec.nontarget_items;
  Rng pos_rng(derive_seed(config.seed, "logistic-pos"));
  Rng neg_rng(derive_seed(config.seed, "logistic-neg"));
  pos_rng.shuffle(pos);
  neg_rng.shuffle(neg);
  std::vector<std::vector<int>> folds((std::size_t(config.folds)));
  for (std::size_t i = 0; i < pos.size(); ++i)
    folds[i % std::size_t(config.folds)].push_back(pos[i]);
  for (std::size_t i = 0; i < neg.size(); ++i)
    folds[i % std::size_t(config.folds)].push_back(neg[i]);

  auto label_of = [&](int idx) {
    return std::find(spec.target_items.begin(), spec.target_items.end(), idx) !=
                   spec.target_items.end()
               ? 1
               : 0;
  };

  const int d = capture.hidden_dim;
  std::vector<double> accuracy;
  accuracy.reserve(layers.size());
  for (int layer : layers) {
    int correct = 0, total = 0;
    for (int f = 0; f < config.folds; ++f) {
      std::vector<std::vector<double>> train_x, test_x;
      std::vector<int> train_y, test_y;
      for (int g = 0; g < config.folds; ++g) {
        for (int idx : folds[std::size_t(g)]) {
          std::span<const float> s = capture.state(layer, idx);
          std::vector<double> row(s.begin(), s.end());
          if (g == f) {
            test_x.push_back(std::move(row));
            test_y.push_back(label_of(idx));
          } else {
            train_x.push_back(std::move(row));
            train_y.push_back(label_of(idx));
          }
        }
      }
      // standardize on the training fold
      std::vector<double> mean(std::size_t(d), 0.0), sd(std::size_t(d), 0.0);
      for (const auto& row : train_x)
        for (int i = 0; i < d; ++i) mean[std::size_t(i)] += row[std::size_t(i)];
      for (auto& mval : mean) mval /= double(train_x.size());
      for (const auto& row : train_x)
        for (int i = 0; i < d; ++i) {
          const double diff = row[std::size_t(i)] - mean[std::size_t(i)];
          sd[std::size_t(i)] += diff * diff;
        }
      for (auto& s2 : sd) s2 = std::sqrt(s2 / double(train_x.size()));
      auto standardize = [&](std::vector<std::vector<double>>& rows) {
        for (auto& row : rows)
          for (int i = 0; i < d; ++i) {
            const double s2 = sd[std::size_t(i)];
            row[std::size_t(i)] =
                s2 > 0 ? (row[std::size_t(i)] - mean[std::size_t(i)]) / s2 : 0.0;
          }
      };
      standardize(train_x);
      standardize(test_x);

      const std::vector<double> w = fit_logistic(train_x, train_y, config);
      for (std::size_t i = 0; i < test_x.size(); ++i) {
        const double z =
            kernels::dot_f64(w.data(), test_x[i].data(), std::size_t(d)) + w[std::size_t(d)];
        const int pred = z >= 0.0 ? 1 : 0;
        if (pred == test_y[i]) ++correct;
        ++total;
      }
    }
    accuracy.push_back(double(correct) / double(total));
  }
  return accuracy;
}

}  // namespace lap
