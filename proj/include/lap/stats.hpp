#pragma once
// Rank and partial correlations, within-family permutation testing, and
// family-level steerability correlations.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lap {

struct SpearmanResult {
  std::optional<double> rho;  // absent for a constant series
  std::optional<double> p;    // two-sided; exact enumeration when n <= 9
  bool constant_series = false;
  int n = 0;
};

// Spearman rank correlation with average ranks for ties.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

struct PartialResult {
  std::optional<double> r;
  std::optional<double> p;  // two-sided t, df = n - 3
  bool z_constant = false;  // reduced to plain Pearson
  bool constant_series = false;
  int n = 0;
};

// Pearson partial correlation of x and y controlling z: the correlation of
// the least-squares residuals of x on z and y on z.
PartialResult pearson_partial(std::span<const double> x, std::span<const double> y,
                              std::span<const double> z);

struct GroupedSeries {
  std::vector<std::string> family_ids;           // one per group
  std::vector<std::vector<double>> x_by_family;  // parallel arrays per group
  std::vector<std::vector<double>> y_by_family;
};

struct PermutationResult {
  double p = 1.0;
  double observed_rho = 0.0;
  int n_perm = 0;    // replicates drawn (sampled mode) or arrangements (exhaustive)
  int count_ge = 0;
  bool exhaustive = false;
};

// Shuffle y within each family independently, recompute the pooled Spearman
// rho each time; one-sided (rho_perm >= rho_observed). When the arrangement
// space is no larger than n_perm the test enumerates it exhaustively and
// p = count/total (the identity arrangement keeps p > 0); otherwise it draws
// n_perm seeded replicates and p = (count + 1) / (n_perm + 1).
PermutationResult within_family_permutation(const GroupedSeries& series,
                                            int n_perm = 10000,
                                            std::uint64_t seed = 0);

struct FamilyPoint {
  std::string family_id;
  double peak_a_lin = 0.0;
  double max_delta_p = 0.0;
};

struct SteerabilityCorr {
  SpearmanResult corr;
  int n = 0;
  std::vector<std::string> families;  // surviving the floor filter
  std::optional<double> floor;
};

// Family-level Spearman between peak a_lin and max delta_p, optionally
// restricted to families with peak a_lin above `floor`.
SteerabilityCorr steerability_correlation(const std::vector<FamilyPoint>& families,
                                          std::optional<double> floor = std::nullopt);

struct CrossModelCorr {
  SpearmanResult corr;
  int n = 0;
  std::vector<std::string> joined;
  std::vector<std::string> missing;  // families present on one side only
};

// Spearman over the inner join (by family id) of source peak a_lin and
// target max delta_p.
CrossModelCorr cross_model_correlation(
    const std::vector<std::pair<std::string, double>>& source_peaks,
    const std::vector<std::pair<std::string, double>>& target_delta_p);

// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> average_ranks(std::span<const double> v);

// Plain Pearson correlation; nullopt when either series is constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Two-sided Student-t tail probability via the regularized incomplete beta.
double student_t_two_sided_p(double t, double df);

}  // namespace lap
