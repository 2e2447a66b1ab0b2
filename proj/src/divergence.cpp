#include "fdiv/divergence.hpp"

#include <cmath>

#include "fdiv/errors.hpp"

namespace fdv {

ExtendedReal divergence_aligned(const Generator& g, const Eigen::VectorXd& nu,
                                const Eigen::VectorXd& mu, double extra_singular) {
  double sum = 0.0;
  double singular = extra_singular;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (mu[i] > 0.0) {
      sum += mu[i] * g.f(nu[i] / mu[i]);
    } else {
      singular += nu[i];
    }
  }
  if (singular > 0.0) sum += g.fprime_at_infinity() * singular;
  return sum;
}

ExtendedReal divergence(const Generator& g, const DiscreteDist& nu, const DiscreteDist& mu) {
  AlignedPair p = align(nu, mu);
  return divergence_aligned(g, p.nu, p.mu);
}

double egamma(const DiscreteDist& nu, const DiscreteDist& mu, double gamma) {
  require(gamma >= 1.0, "egamma needs gamma >= 1");
  AlignedPair p = align(nu, mu);
  auto on_support = (p.mu.array() > 0.0);
  double excess = on_support.select((p.nu - gamma * p.mu).array().max(0.0), 0.0).sum();
  double singular = on_support.select(0.0, p.nu.array()).sum();
  return excess + singular;
}

double tv_distance(const DiscreteDist& nu, const DiscreteDist& mu) {
  AlignedPair p = align(nu, mu);
  return 0.5 * (p.nu - p.mu).cwiseAbs().sum();
}

double ratio_tail_mass(const DiscreteDist& nu, const DiscreteDist& mu, double M) {
  require(M > 0.0, "ratio_tail_mass needs M > 0");
  AlignedPair p = align(nu, mu);
  double tail = 0.0;
  for (Eigen::Index i = 0; i < p.nu.size(); ++i) {
    if (p.nu[i] <= 0.0) continue;
    if (p.mu[i] <= 0.0 || p.nu[i] / p.mu[i] > M) tail += p.nu[i];
  }
  return tail;
}

double ratio_tail_mass(const Generator& g, const DiscreteDist& nu, const DiscreteDist& mu,
                       double M) {
  double tail = ratio_tail_mass(nu, mu, M);
  if (M >= 2.0) {
    double slope = g.fprime(M / 2.0);
    double d = divergence(g, nu, mu);
    if (slope > 0.0 && std::isfinite(d)) {
      double bound = 2.0 * d / slope;
      if (tail > bound * (1.0 + 1e-12) + 1e-15) {
        throw InvariantViolation("ratio tail mass " + std::to_string(tail) +
                                 " exceeds 2D/f'(M/2) = " + std::to_string(bound));
      }
    }
  }
  return tail;
}

}  // namespace fdv
