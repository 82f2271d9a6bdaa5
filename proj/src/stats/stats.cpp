#include "lap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "lap/error.hpp"
#include "lap/rng.hpp"

namespace lap {

namespace {

bool is_constant(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return false;
  return true;
}

// regularized incomplete beta via Lentz's continued fraction
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 200;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double pearson_raw(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

double spearman_rho_raw(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson_raw(rx, ry);
}

// exact two-sided permutation p of the Spearman rho for small n
double exact_permutation_p(std::span<const double> x, std::span<const double> y,
                           double observed) {
  std::vector<double> perm(y.begin(), y.end());
  std::sort(perm.begin(), perm.end());
  long total = 0, extreme = 0;
  const double target = std::fabs(observed) - 1e-12;
  do {
    const double rho = spearman_rho_raw(x, perm);
    if (std::isnan(rho)) continue;
    ++total;
    if (std::fabs(rho) >= target) ++extreme;
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (total == 0) return 1.0;
  return double(extreme) / double(total);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (double(i + 1) + double(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw data_error("pearson: length mismatch");
  if (x.size() < 2) throw data_error("pearson: need at least 2 points");
  const double r = pearson_raw(x, y);
  if (std::isnan(r)) return std::nullopt;
  return r;
}

double student_t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  return betai(0.5 * df, 0.5, df / (df + t * t));
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw data_error("spearman: length mismatch");
  if (x.size() < 3) throw data_error("spearman: need at least 3 points");
  SpearmanResult res;
  res.n = int(x.size());
  if (is_constant(x) || is_constant(y)) {
    res.constant_series = true;
    return res;
  }
  const double rho = spearman_rho_raw(x, y);
  if (std::isnan(rho)) {
    res.constant_series = true;
    return res;
  }
  res.rho = rho;
  if (x.size() <= 9) {
    res.p = exact_permutation_p(x, y, rho);
  } else {
    const double n = double(x.size());
    const double denom = std::max(1.0 - rho * rho, 1e-15);
    const double t = rho * std::sqrt((n - 2.0) / denom);
    res.p = student_t_two_sided_p(t, n - 2.0);
  }
  return res;
}

PartialResult pearson_partial(std::span<const double> x, std::span<const double> y,
                              std::span<const double> z) {
  if (x.size() != y.size() || x.size() != z.size())
    throw data_error("pearson_partial: length mismatch");
  if (x.size() < 4) throw data_error("pearson_partial: need at least 4 points");
  PartialResult res;
  res.n = int(x.size());

  const std::size_t n = x.size();
  std::vector<double> rx(n), ry(n);
  if (is_constant(z)) {
    res.z_constant = true;
    rx.assign(x.begin(), x.end());
    ry.assign(y.begin(), y.end());
  } else {
    // least-squares residuals of x on z and y on z
    double mz = 0.0;
    for (double v : z) mz += v;
    mz /= double(n);
    double szz = 0.0;
    for (double v : z) szz += (v - mz) * (v - mz);
    auto residualize = [&](std::span<const double> s, std::vector<double>& out) {
      double ms = 0.0;
      for (double v : s) ms += v;
      ms /= double(n);
      double szs = 0.0;
      for (std::size_t i = 0; i < n; ++i) szs += (z[i] - mz) * (s[i] - ms);
      const double slope = szs / szz;
      for (std::size_t i = 0; i < n; ++i)
        out[i] = s[i] - (ms + slope * (z[i] - mz));
    };
    residualize(x, rx);
    residualize(y, ry);
  }

  const double r = pearson_raw(rx, ry);
  if (std::isnan(r)) {
    res.constant_series = true;
    return res;
  }
  res.r = r;
  const double df = double(res.n) - 3.0;
  if (df > 0) {
    const double denom = std::max(1.0 - r * r, 1e-15);
    const double t = r * std::sqrt(df / denom);
    res.p = student_t_two_sided_p(t, df);
  }
  return res;
}

PermutationResult within_family_permutation(const GroupedSeries& series, int n_perm,
                                            std::uint64_t seed) {
  if (series.x_by_family.size() < 2)
    throw data_error("within_family_permutation: need at least 2 families");
  if (series.x_by_family.size() != series.y_by_family.size())
    throw data_error("within_family_permutation: group count mismatch");
  for (std::size_t f = 0; f < series.x_by_family.size(); ++f)
    if (series.x_by_family[f].size() != series.y_by_family[f].size())
      throw data_error("within_family_permutation: group length mismatch");
  if (n_perm < 1) throw data_error("within_family_permutation: n_perm must be >= 1");

  std::vector<double> x_pool, y_pool;
  for (std::size_t f = 0; f < series.x_by_family.size(); ++f) {
    x_pool.insert(x_pool.end(), series.x_by_family[f].begin(),
                  series.x_by_family[f].end());
    y_pool.insert(y_pool.end(), series.y_by_family[f].begin(),
                  series.y_by_family[f].end());
  }
  const double observed = spearman_rho_raw(x_pool, y_pool);
  if (std::isnan(observed))
    throw data_error("within_family_permutation: constant pooled series");

  PermutationResult res;
  res.observed_rho = observed;

  // size of the arrangement space, saturating above n_perm
  double space = 1.0;
  for (const auto& g : series.y_by_family) {
    for (std::size_t i = 2; i <= g.size(); ++i) space *= double(i);
    if (space > double(n_perm)) break;
  }

  if (space <= double(n_perm)) {
    // exhaustive: walk the cartesian product of per-family arrangements
    res.exhaustive = true;
    std::vector<std::vector<double>> groups = series.y_by_family;
    for (auto& g : groups) std::sort(g.begin(), g.end());
    int total = 0;
    std::vector<double> y_perm(y_pool.size());
    const std::size_t nf = groups.size();
    std::vector<bool> done(nf, false);
    while (true) {
      std::size_t off = 0;
      for (const auto& g : groups) {
        std::copy(g.begin(), g.end(), y_perm.begin() + long(off));
        off += g.size();
      }
      const double rho = spearman_rho_raw(x_pool, y_perm);
      ++total;
      if (!std::isnan(rho) && rho >= observed - 1e-15) ++res.count_ge;
      // odometer over per-family next_permutation
      std::size_t f = 0;
      while (f < nf && !std::next_permutation(groups[f].begin(), groups[f].end())) ++f;
      if (f == nf) break;
    }
    res.n_perm = total;
    res.p = double(res.count_ge) / double(total);
    return res;
  }

  res.n_perm = n_perm;
  for (int r = 0; r < n_perm; ++r) {
    std::vector<double> y_perm;
    y_perm.reserve(y_pool.size());
    for (std::size_t f = 0; f < series.y_by_family.size(); ++f) {
      std::vector<double> g = series.y_by_family[f];
      Rng rng(derive_seed(seed, "perm", std::uint64_t(r), std::uint64_t(f)));
      rng.shuffle(g);
      y_perm.insert(y_perm.end(), g.begin(), g.end());
    }
    const double rho = spearman_rho_raw(x_pool, y_perm);
    if (!std::isnan(rho) && rho >= observed - 1e-15) ++res.count_ge;
  }
  res.p = double(res.count_ge + 1) / double(n_perm + 1);
  return res;
}

SteerabilityCorr steerability_correlation(const std::vector<FamilyPoint>& families,
                                          std::optional<double> floor) {
  SteerabilityCorr out;
  out.floor = floor;
  std::vector<double> x, y;
  for (const auto& f : families) {
    if (floor && !(f.peak_a_lin > *floor)) continue;
    out.families.push_back(f.family_id);
    x.push_back(f.peak_a_lin);
    y.push_back(f.max_delta_p);
  }
  out.n = int(x.size());
  if (out.n < 3) {
    std::string msg = "steerability_correlation: only " + std::to_string(out.n) +
                      " families after floor filter; surviving:";
    for (const auto& id : out.families) msg += " " + id;
    throw data_error(msg);
  }
  out.corr = spearman(x, y);
  return out;
}

CrossModelCorr cross_model_correlation(
    const std::vector<std::pair<std::string, double>>& source_peaks,
    const std::vector<std::pair<std::string, double>>& target_delta_p) {
  std::map<std::string, double> src(source_peaks.begin(), source_peaks.end());
  std::map<std::string, double> dst(target_delta_p.begin(), target_delta_p.end());
  CrossModelCorr out;
  std::vector<double> x, y;
  for (const auto& [id, peak] : src) {
    auto it = dst.find(id);
    if (it == dst.end()) {
      out.missing.push_back(id + " (source only)");
      continue;
    }
    out.joined.push_back(id);
    x.push_back(peak);
    y.push_back(it->second);
  }
  for (const auto& [id, dp] : dst) {
    (void)dp;
    if (!src.count(id)) out.missing.push_back(id + " (target only)");
  }
  if (out.joined.empty())
    throw data_error("cross_model_correlation: join is empty");
  if (out.joined.size() < 3)
    throw data_error("cross_model_correlation: join has fewer than 3 families");
  out.n = int(out.joined.size());
  out.corr = spearman(x, y);
  return out;
}

}  // namespace lap
