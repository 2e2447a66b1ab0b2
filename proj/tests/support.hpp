#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fdiv/discrete_dist.hpp"
#include "fdiv/generator.hpp"

namespace fdv::test {

inline bool near(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

// Hand-rolled generators for property tests. Each property seeds its own
// instance so failures replay.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  // Masses on `k` atoms; each atom is zeroed with probability `zero_p`
  // (at least one atom keeps mass).
  std::vector<double> masses(int k, double zero_p = 0.0) {
    std::vector<double> w(static_cast<std::size_t>(k));
    double total = 0.0;
    for (auto& v : w) {
      v = coin(zero_p) ? 0.0 : uniform(0.05, 1.0);
      total += v;
    }
    if (total == 0.0) {
      w[static_cast<std::size_t>(integer(0, k - 1))] = 1.0;
      total = 1.0;
    }
    for (auto& v : w) v /= total;
    return w;
  }

  static std::vector<std::string> labels(int k, const std::string& prefix = "x") {
    std::vector<std::string> out;
    for (int i = 0; i < k; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  }

  DiscreteDist dist(int k, double zero_p = 0.0) {
    return DiscreteDist(labels(k), masses(k, zero_p));
  }

  // Numeric labels i/(k-1) on [0,1].
  DiscreteDist grid_dist(int k, double zero_p = 0.0) {
    std::vector<std::string> l;
    for (int i = 0; i < k; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(i) / (k - 1));
      l.push_back(buf);
    }
    return DiscreteDist(l, masses(k, zero_p));
  }

  Generator generator() {
    switch (integer(0, 3)) {
      case 0: return Generator::tv();
      case 1: return Generator::kl();
      case 2: return Generator::renyi(uniform(1.1, 5.0));
      default: return Generator::egamma(uniform(1.0, 4.0));
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Label -> mass map, the oracle-side view of a distribution.
inline std::map<std::string, double> as_map(const DiscreteDist& d) {
  std::map<std::string, double> m;
  for (std::size_t i = 0; i < d.size(); ++i) m[d.label(i)] += d.mass(i);
  return m;
}

}  // namespace fdv::test
