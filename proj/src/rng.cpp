#include "fdiv/rng.hpp"

#include <algorithm>

#include "fdiv/errors.hpp"

namespace fdv {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(splitmix64(splitmix64(seed) ^ h) ^ index);
}

Categorical::Categorical(const Eigen::VectorXd& masses) {
  if (masses.size() == 0) throw DataError("categorical over an empty support");
  masses_.assign(masses.data(), masses.data() + masses.size());
  cdf_.resize(masses_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    acc += masses_[i];
    cdf_[i] = acc;
  }
}

std::size_t Categorical::operator()(Rng& rng) const {
  double u = uniform01(rng) * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  if (i >= cdf_.size()) i = cdf_.size() - 1;
  // never land on a zero-mass atom at a cdf plateau
  while (masses_[i] <= 0.0 && i > 0) --i;
  return i;
}

std::vector<std::int64_t> Categorical::counts(std::int64_t n, Rng& rng) const {
  std::vector<std::int64_t> out(masses_.size(), 0);
  std::int64_t left = n;
  double rest = cdf_.back();
  std::size_t last = masses_.size() - 1;
  while (last > 0 && masses_[last] == 0.0) --last;
  for (std::size_t i = 0; i <= last && left > 0; ++i) {
    if (i == last) {
      out[i] = left;
      break;
    }
    double p = rest > 0.0 ? std::clamp(masses_[i] / rest, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::int64_t> bin(left, p);
    out[i] = bin(rng);
    left -= out[i];
    rest -= masses_[i];
  }
  return out;
}

}  // namespace fdv
