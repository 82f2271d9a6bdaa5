#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lap/diagnosis.hpp"
#include "lap/error.hpp"
#include "lap/kernels.hpp"
#include "lap/rng.hpp"

namespace lap {

const char* const kFailureFeatureNames[kFailureFeatureCount] = {
    "projection", "lambda", "centroid_distance", "steered_target_rank",
    "baseline_target_p"};

const char* failure_label_name(FailureLabel l) {
  switch (l) {
    case FailureLabel::wrong_direction: return "wrong_direction";
    case FailureLabel::indistinguishable: return "indistinguishable";
    case FailureLabel::chaotic: return "chaotic";
    case FailureLabel::low_engagement: return "low_engagement";
    case FailureLabel::unlabeled: return "unlabeled";
  }
  return "?";
}

namespace {

double softmax_prob(const std::vector<double>& logits, int token) {
  double mx = logits[0];
  for (double l : logits) mx = std::max(mx, l);
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - mx);
  return std::exp(logits[std::size_t(token)] - mx) / sum;
}

int descending_rank(const std::vector<double>& logits, int token) {
  const double value = logits[std::size_t(token)];
  int rank = 1;
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (int(v) == token) continue;
    if (logits[v] > value || (logits[v] == value && int(v) < token)) ++rank;
  }
  return rank;
}

double per_prompt_lambda(const ModelHandle& model, const ActivationCapture& capture,
                         int layer, int prompt, int k, std::uint64_t seed) {
  std::span<const float> s = capture.state(layer, prompt);
  std::vector<double> h(s.begin(), s.end());
  const double norm = std::sqrt(kernels::sumsq_f64(h.data(), h.size()));
  if (norm == 0.0) return 0.0;
  const double alpha = 0.01 * norm;
  std::vector<double> base = resume_logits_f64(model, layer, h);
  double sum = 0.0;
  for (int kk = 0; kk < k; ++kk) {
    Rng rng(derive_seed(seed, "lambda-dir", std::uint64_t(layer), std::uint64_t(prompt),
                        std::uint64_t(kk)));
    std::vector<double> eps = unit_direction(rng, h.size());
    std::vector<double> hp = h;
    kernels::axpy_f64(alpha, eps.data(), hp.data(), hp.size());
    std::vector<double> pert = resume_logits_f64(model, layer, hp);
    double ss = 0.0;
    for (std::size_t i = 0; i < pert.size(); ++i) {
      const double diff = pert[i] - base[i];
      ss += diff * diff;
    }
    sum += std::sqrt(ss) / alpha;
  }
  return sum / double(k);
}

}  // namespace

FailureAnalysis failure_features(const ModelHandle& model,
                                 const ActivationCapture& capture,
                                 const SteeringSpec& spec, int layer, double scale,
                                 int lambda_k, std::uint64_t seed) {
  SteeringDirection dir = steering_direction(capture, spec, layer);
  if (spec.target_token_id < 0)
    throw data_error("failure_features: steering spec has no validated target token");
  if (dir.d_norm == 0.0)
    throw data_error("failure_features: zero steering direction");

  const int d = capture.hidden_dim;
  const int target = spec.target_token_id;

  // family centroid over all captured items at this layer
  std::vector<double> centroid(std::size_t(d), 0.0);
  for (int p = 0; p < capture.num_prompts(); ++p) {
    std::span<const float> s = capture.state(layer, p);
    for (int i = 0; i < d; ++i) centroid[std::size_t(i)] += double(s[std::size_t(i)]);
  }
  for (auto& c : centroid) c /= double(capture.num_prompts());

  FailureAnalysis out;
  out.layer = layer;
  out.scale = scale;

  std::vector<std::array<double, kFailureFeatureCount>> success_raw;
  for (int idx : spec.nontarget_items) {
    std::span<const float> s = capture.state(layer, idx);
    std::vector<double> h(s.begin(), s.end());
    std::vector<double> steered = h;
    kernels::axpy_f64(scale, dir.vector.data(), steered.data(), steered.size());
    std::vector<double> steered_logits = resume_logits_f64(model, layer, steered);
    const int steered_argmax =
        int(kernels::argmax_f64(steered_logits.data(), steered_logits.size()));

    std::array<double, kFailureFeatureCount> f{};
    f[0] = kernels::dot_f64(h.data(), dir.vector.data(), h.size()) / dir.d_norm;
    f[1] = per_prompt_lambda(model, capture, layer, idx, lambda_k, seed);
    double dist = 0.0;
    for (int i = 0; i < d; ++i) {
      const double diff = h[std::size_t(i)] - centroid[std::size_t(i)];
      dist += diff * diff;
    }
    f[2] = std::sqrt(dist);
    f[3] = double(descending_rank(steered_logits, target));
    f[4] = softmax_prob(resume_logits_f64(model, layer, h), target);

    if (steered_argmax == target) {
      out.success_items.push_back(idx);
      success_raw.push_back(f);
    } else {
      out.failed_items.push_back(idx);
      out.raw.push_back(f);
    }
  }

  // standardize over the failed set
  const std::size_t n = out.raw.size();
  if (n > 0) {
    std::array<double, kFailureFeatureCount> mean{}, sd{};
    for (const auto& f : out.raw)
      for (int j = 0; j < kFailureFeatureCount; ++j) mean[std::size_t(j)] += f[std::size_t(j)];
    for (auto& m : mean) m /= double(n);
    for (const auto& f : out.raw)
      for (int j = 0; j < kFailureFeatureCount; ++j) {
        const double diff = f[std::size_t(j)] - mean[std::size_t(j)];
        sd[std::size_t(j)] += diff * diff;
      }
    for (auto& s : sd) s = std::sqrt(s / double(n));
    out.standardized.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      for (int j = 0; j < kFailureFeatureCount; ++j) {
        const double s = sd[std::size_t(j)];
        out.standardized[i][std::size_t(j)] =
            s > 0 ? (out.raw[i][std::size_t(j)] - mean[std::size_t(j)]) / s : 0.0;
      }
  }

  if (!success_raw.empty()) {
    out.has_success_stats = true;
    for (const auto& f : success_raw)
      for (int j = 0; j < kFailureFeatureCount; ++j)
        out.success_mean[std::size_t(j)] += f[std::size_t(j)];
    for (auto& m : out.success_mean) m /= double(success_raw.size());
    for (const auto& f : success_raw)
      for (int j = 0; j < kFailureFeatureCount; ++j) {
        const double diff = f[std::size_t(j)] - out.success_mean[std::size_t(j)];
        out.success_std[std::size_t(j)] += diff * diff;
      }
    for (auto& s : out.success_std) s = std::sqrt(s / double(success_raw.size()));
  }
  return out;
}

// ---- k-means --------------------------------------------------------------------

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

KMeansResult lloyd(const std::vector<std::vector<double>>& points, int k, Rng& rng) {
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();

  // init: k distinct points
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<std::vector<double>> centroids;
  for (int c = 0; c < k; ++c) centroids.push_back(points[order[std::size_t(c)]]);

  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < 200; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points[i], centroids[0]);
      for (int c = 1; c < k; ++c) {
        const double dd = sq_dist(points[i], centroids[std::size_t(c)]);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    // recompute centroids; an emptied cluster takes the point farthest from
    // its current centroid
    std::vector<std::vector<double>> sums(std::size_t(k),
                                          std::vector<double>(dim, 0.0));
    std::vector<int> counts(std::size_t(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < dim; ++j) sums[std::size_t(assignment[i])][j] += points[i][j];
      counts[std::size_t(assignment[i])]++;
    }
    for (int c = 0; c < k; ++c) {
      if (counts[std::size_t(c)] == 0) {
        std::size_t far_i = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dd = sq_dist(points[i], centroids[std::size_t(assignment[i])]);
          if (dd > far_d) {
            far_d = dd;
            far_i = i;
          }
        }
        assignment[far_i] = c;
        centroids[std::size_t(c)] = points[far_i];
        changed = true;
      } else {
        for (std::size_t j = 0; j < dim; ++j)
          centroids[std::size_t(c)][j] = sums[std::size_t(c)][j] / double(counts[std::size_t(c)]);
      }
    }
    if (!changed) break;
  }

  KMeansResult res;
  res.assignment = assignment;
  res.centroids = centroids;
  res.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    res.objective += sq_dist(points[i], centroids[std::size_t(assignment[i])]);
  return res;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    int restarts, std::uint64_t seed) {
  if (points.empty()) throw data_error("kmeans: no points");
  if (k < 1 || k > int(points.size()))
    throw data_error("kmeans: k out of range");
  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, "kmeans", std::uint64_t(k), std::uint64_t(r)));
    KMeansResult res = lloyd(points, k, rng);
    if (res.objective < best.objective) best = std::move(res);
  }
  return best;
}

double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& assignment, int k) {
  const std::size_t n = points.size();
  std::vector<int> counts(std::size_t(k), 0);
  for (int a : assignment) counts[std::size_t(a)]++;

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int own = assignment[i];
    if (counts[std::size_t(own)] <= 1) continue;  // singleton: s = 0
    std::vector<double> mean_dist(std::size_t(k), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_dist[std::size_t(assignment[j])] += std::sqrt(sq_dist(points[i], points[j]));
    }
    const double a = mean_dist[std::size_t(own)] / double(counts[std::size_t(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || counts[std::size_t(c)] == 0) continue;
      b = std::min(b, mean_dist[std::size_t(c)] / double(counts[std::size_t(c)]));
    }
    if (!std::isfinite(b)) continue;
    const double denom = std::max(a, b);
    total += denom > 0 ? (b - a) / denom : 0.0;
  }
  return total / double(n);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw data_error("percentile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * double(values.size() - 1);
  const std::size_t lo = std::size_t(std::floor(pos));
  const std::size_t hi = std::size_t(std::ceil(pos));
  const double frac = pos - double(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

FailureReport cluster_failures(const FailureAnalysis& analysis,
                               const ClusterOptions& options) {
  FailureReport report;
  report.n_failed = int(analysis.failed_items.size());

  std::vector<std::vector<double>> points;
  for (const auto& f : analysis.standardized)
    points.emplace_back(f.begin(), f.end());

  // percentile landmarks over the failed set (raw space)
  auto column = [&](int j) {
    std::vector<double> col;
    for (const auto& f : analysis.raw) col.push_back(f[std::size_t(j)]);
    return col;
  };

  auto label_cluster = [&](FailureCluster& cluster) {
    if (analysis.raw.empty()) return;
    const std::vector<double> lam = column(1);
    const std::vector<double> dist = column(2);
    const std::vector<double> proj = column(0);
    const double lam_p75 = percentile(lam, 75.0);
    const double lam_p25 = percentile(lam, 25.0);
    const double dist_p75 = percentile(dist, 75.0);
    const double proj_median = percentile(proj, 50.0);

    const auto& m = cluster.mean_raw;
    if (m[0] < 0.0) {
      cluster.label = FailureLabel::wrong_direction;
    } else if (m[1] > lam_p75 && m[2] > dist_p75) {
      cluster.label = FailureLabel::chaotic;
    } else if (m[1] < lam_p25 && m[0] < proj_median) {
      cluster.label = FailureLabel::low_engagement;
    } else if (analysis.has_success_stats) {
      bool within = true;
      for (int j = 0; j < kFailureFeatureCount; ++j) {
        if (std::fabs(m[std::size_t(j)] - analysis.success_mean[std::size_t(j)]) >
            analysis.success_std[std::size_t(j)]) {
          within = false;
          break;
        }
      }
      cluster.label = within ? FailureLabel::indistinguishable : FailureLabel::unlabeled;
    } else {
      cluster.label = FailureLabel::unlabeled;
    }
  };

  auto finish_cluster = [&](FailureCluster& cluster,
                            const std::vector<int>& member_rows) {
    for (int row : member_rows) {
      cluster.members.push_back(analysis.failed_items[std::size_t(row)]);
      for (int j = 0; j < kFailureFeatureCount; ++j)
        cluster.mean_raw[std::size_t(j)] += analysis.raw[std::size_t(row)][std::size_t(j)];
    }
    for (auto& m : cluster.mean_raw) m /= double(member_rows.size());
    label_cluster(cluster);
  };

  if (report.n_failed < 3) {
    if (report.n_failed == 0) return report;
    FailureCluster cluster;
    cluster.cluster_id = 0;
    cluster.label = FailureLabel::unlabeled;
    std::vector<int> rows((std::size_t(report.n_failed)));
    std::iota(rows.begin(), rows.end(), 0);
    for (int row : rows) {
      cluster.members.push_back(analysis.failed_items[std::size_t(row)]);
      for (int j = 0; j < kFailureFeatureCount; ++j)
        cluster.mean_raw[std::size_t(j)] += analysis.raw[std::size_t(row)][std::size_t(j)];
    }
    for (auto& m : cluster.mean_raw) m /= double(report.n_failed);
    report.k = 1;
    report.clusters.push_back(std::move(cluster));
    return report;
  }

  const int k_max = std::min(options.k_max, report.n_failed - 1);
  const int k_min = std::min(options.k_min, k_max);

  int best_k = k_min;
  double best_sil = -2.0;
  KMeansResult best_res;
  for (int k = k_min; k <= k_max; ++k) {
    KMeansResult res = kmeans(points, k, options.restarts, options.seed);
    const double sil = mean_silhouette(points, res.assignment, k);
    report.silhouette_by_k.push_back({k, sil});
    if (sil > best_sil) {
      best_sil = sil;
      best_k = k;
      best_res = std::move(res);
    }
  }
  report.k = best_k;
  report.silhouette = best_sil;

  for (int c = 0; c < best_k; ++c) {
    FailureCluster cluster;
    cluster.cluster_id = c;
    cluster.silhouette = best_sil;
    for (int j = 0; j < kFailureFeatureCount; ++j)
      cluster.centroid[std::size_t(j)] = best_res.centroids[std::size_t(c)][std::size_t(j)];
    std::vector<int> member_rows;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (best_res.assignment[i] == c) member_rows.push_back(int(i));
    if (member_rows.empty()) continue;
    finish_cluster(cluster, member_rows);
    report.clusters.push_back(std::move(cluster));
  }
  return report;
}

}  // namespace lap
