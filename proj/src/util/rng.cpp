#include "lap/rng.hpp"

#include "lap/hash.hpp"

namespace lap {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = fnv1a64(label);
  std::uint64_t state = seed ^ h;
  splitmix64(state);
  state ^= 0x9E3779B97F4A7C15ull * (a + 1);
  splitmix64(state);
  state ^= 0xC2B2AE3D27D4EB4Full * (b + 1);
  splitmix64(state);
  state ^= 0x165667B19E3779F9ull * (c + 1);
  return splitmix64(state);
}

std::vector<double> unit_direction(Rng& rng, std::size_t n) {
  std::vector<double> v = rng.gaussian_vector(n);
  double ss = 0.0;
  for (double x : v) ss += x * x;
  if (ss <= 0.0) {
    // astronomically unlikely; fall back to an axis vector
    v.assign(n, 0.0);
    if (n) v[0] = 1.0;
    return v;
  }
  const double inv = 1.0 / std::sqrt(ss);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace lap
