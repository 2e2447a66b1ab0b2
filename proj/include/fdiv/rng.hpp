#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace fdv {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/*
 * Seed splitting. child = mix(mix(mix(seed) ^ fnv1a(tag)) ^ index) with
 * mix = splitmix64 finaliser and fnv1a the 64-bit FNV-1a string hash.
 */
std::uint64_t child_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
  return Rng(child_seed(seed, tag, index));
}

// 53-bit uniform in [0,1), independent of the standard library's
// distribution implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int rademacher(Rng& rng) { return (rng() >> 63) ? 1 : -1; }

// Inverse-CDF sampling from a fixed mass vector.
class Categorical {
 public:
  Categorical() = default;
  explicit Categorical(const Eigen::VectorXd& masses);
  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cdf_.size(); }
  double mass(std::size_t i) const { return masses_[i]; }

  // Multinomial(n, masses) counts, via sequential conditional binomials.
  std::vector<std::int64_t> counts(std::int64_t n, Rng& rng) const;

 private:
  std::vector<double> cdf_;
  std::vector<double> masses_;
};

}  // namespace fdv
