#pragma once
// Deterministic, platform-independent randomness. Every consumer derives its
// own stream from (seed, label, counters), so results do not depend on call
// order or scheduling.

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace lap {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Mix a label and counters into a seed so distinct streams never collide by
// construction of the call site.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t a = 0, std::uint64_t b = 0,
                          std::uint64_t c = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // burn-in so small seeds diverge immediately
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // modulo bias is irrelevant at our n << 2^64
    return n ? next_u64() % n : 0;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  std::vector<double> gaussian_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = gaussian();
    return v;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = std::size_t(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// n-dimensional direction drawn uniformly from the unit sphere.
std::vector<double> unit_direction(Rng& rng, std::size_t n);

}  // namespace lap
