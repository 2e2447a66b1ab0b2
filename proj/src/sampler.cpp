#include "fdiv/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdiv/complexity.hpp"
#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"

namespace fdv {

SamplerPlan make_plan(const Generator& g, double D, double eps) {
  require(eps > 0.0 && eps < 1.0, "make_plan needs 0 < eps < 1");
  require(D >= 0.0, "make_plan needs D >= 0");
  double inv = g.inv_fprime(4.0 * D / eps);
  if (!std::isfinite(inv)) {
    throw UnboundedTruncation("(f')^{-1}(4D/eps) is infinite for " + g.name() +
                              "; no finite truncation level exists");
  }
  double n = upper_bound_n(g, D, eps);
  if (!(n < 9.0e18)) throw UnboundedTruncation("sample budget overflows");
  return {2.0 * inv, static_cast<std::int64_t>(n), Fallback::uniform_index};
}

RatioMap likelihood_ratio(const DiscreteDist& nu, const DiscreteDist& mu) {
  RatioMap r;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.mass(i) > 0.0) r[mu.label(i)] = nu.mass_of(mu.label(i)) / mu.mass(i);
  }
  return r;
}

namespace {

std::size_t fallback_index(const SamplerPlan& plan, Rng& rng) {
  if (plan.fallback == Fallback::fixed_first) return 0;
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(plan.n));
}

}  // namespace

SamplerOutcome rejection_select(const DiscreteDist& mu, const RatioMap& ratio,
                                const SamplerPlan& plan, std::uint64_t seed) {
  require(plan.n >= 1 && plan.M > 0.0, "rejection_select needs n >= 1 and M > 0");
  Rng rng = make_rng(seed, "rejection_select");
  Categorical draw(mu.masses());
  SamplerOutcome out;
  out.draws.reserve(static_cast<std::size_t>(plan.n));
  std::size_t chosen = 0;
  for (std::int64_t j = 0; j < plan.n; ++j) {
    const std::string& label = mu.label(draw(rng));
    auto it = ratio.find(label);
    if (it == ratio.end()) throw DataError("no ratio for drawn label '" + label + "'");
    double r = it->second;
    double u = uniform01(rng);
    if (!out.accepted && r <= plan.M && u < r / plan.M) {
      out.accepted = true;
      chosen = static_cast<std::size_t>(j);
    }
    out.draws.push_back(label);
  }
  if (!out.accepted) {
    Rng fb = make_rng(seed, "rejection_select/fallback");
    chosen = fallback_index(plan, fb);
  }
  out.chosen_index = chosen + 1;
  return out;
}

std::size_t rejection_select_index(const Categorical& mu, const std::vector<double>& ratio,
                                   const SamplerPlan& plan, Rng& rng) {
  std::size_t first = 0;
  std::int64_t fallback_j = plan.fallback == Fallback::fixed_first
                                ? 0
                                : static_cast<std::int64_t>(uniform01(rng) *
                                                            static_cast<double>(plan.n));
  for (std::int64_t j = 0; j < plan.n; ++j) {
    std::size_t x = mu(rng);
    if (j == 0) first = x;
    double r = ratio[x];
    if (r <= plan.M && uniform01(rng) < r / plan.M) return x;
    if (j == fallback_j) first = x;
  }
  return first;
}

OutputLaw exact_output_law(const DiscreteDist& nu, const DiscreteDist& mu, double M,
                           std::int64_t n) {
  require(M > 0.0 && n >= 1, "exact_output_law needs M > 0 and n >= 1");
  const auto k = static_cast<Eigen::Index>(mu.size());
  Eigen::VectorXd nu_on_mu(k), acc(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    double m = mu.mass(static_cast<std::size_t>(i));
    double v = nu.mass_of(mu.label(static_cast<std::size_t>(i)));
    bool kept = m > 0.0 && v / m <= M;
    nu_on_mu[i] = kept ? v : 0.0;
    acc[i] = kept ? v / m / M : 0.0;
  }
  double kept_mass = nu_on_mu.sum();
  if (!(kept_mass > 0.0)) {
    throw DegenerateTruncation("nu(ratio <= M) = 0; the truncated target is undefined");
  }
  double a = kept_mass / M;
  double q = -std::expm1(static_cast<double>(n) * std::log1p(-std::min(a, 1.0)));
  Eigen::VectorXd law = q * nu_on_mu / kept_mass;
  if (q < 1.0) {
    Eigen::VectorXd rej = mu.masses().array() * (1.0 - acc.array());
    double rej_mass = rej.sum();
    if (rej_mass > 0.0) law += (1.0 - q) * rej / rej_mass;
  }
  law /= law.sum();
  DiscreteDist out(mu.labels(), law);
  double tv = tv_distance(out, nu);
  return {std::move(out), tv, a, q};
}

ClampResult clamp_projection(const DiscreteDist& nu, const DiscreteDist& mu, double gamma) {
  require(gamma >= 1.0, "clamp_projection needs gamma >= 1");
  AlignedPair p = align(nu, mu);
  Eigen::VectorXd cap = gamma * p.mu;
  Eigen::VectorXd out = p.nu.cwiseMin(cap);
  double removed = (p.nu - out).sum();

  std::vector<std::size_t> order(p.labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p.labels[a] < p.labels[b]; });
  double left = removed;
  for (std::size_t i : order) {
    if (left <= 0.0) break;
    auto idx = static_cast<Eigen::Index>(i);
    double room = cap[idx] - out[idx];
    if (room <= 0.0) continue;
    double put = std::min(room, left);
    out[idx] += put;
    left -= put;
  }
  if (left > 1e-12) throw InvariantViolation("clamp_projection could not place all mass");

  DiscreteDist tilde(p.labels, out);
  double tv = tv_distance(tilde, nu);
  double e = egamma(nu, mu, gamma);
  if (std::abs(tv - e) > 1e-12) {
    throw InvariantViolation("clamp_projection tv " + std::to_string(tv) +
                             " differs from E_gamma " + std::to_string(e));
  }
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] > 0.0 && out[i] > cap[i] * (1.0 + 1e-12) + 1e-15) {
      throw InvariantViolation("clamp_projection ratio exceeds gamma");
    }
  }
  return {std::move(tilde), tv};
}

DiscreteDist brute_force_output_law(const DiscreteDist& mu, const SelectionRule& rule, int n) {
  require(n >= 1, "brute_force_output_law needs n >= 1");
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.mass(i) > 0.0) support.push_back(i);
  }
  double tuples = std::pow(static_cast<double>(support.size()), n);
  if (tuples > 1e6) throw SizeError("enumeration exceeds 1e6 tuples");

  Eigen::VectorXd law = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mu.size()));
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  std::vector<std::string> labels(static_cast<std::size_t>(n));
  const auto total = static_cast<std::int64_t>(tuples);
  for (std::int64_t t = 0; t < total; ++t) {
    double prob = 1.0;
    for (int j = 0; j < n; ++j) {
      std::size_t atom = support[digit[static_cast<std::size_t>(j)]];
      labels[static_cast<std::size_t>(j)] = mu.label(atom);
      prob *= mu.mass(atom);
    }
    std::size_t pick = rule(std::span<const std::string>(labels));
    if (pick >= static_cast<std::size_t>(n)) throw DataError("selection rule index out of range");
    law[static_cast<Eigen::Index>(support[digit[pick]])] += prob;
    for (int j = n - 1; j >= 0; --j) {
      auto& dj = digit[static_cast<std::size_t>(j)];
      if (++dj < support.size()) break;
      dj = 0;
    }
  }
  for (std::size_t i : support) {
    double ratio = law[static_cast<Eigen::Index>(i)] / mu.mass(i);
    if (ratio > n + 1e-12) {
      throw InvariantViolation("selection law ratio " + std::to_string(ratio) +
                               " exceeds n = " + std::to_string(n));
    }
  }
  return DiscreteDist(mu.labels(), law);
}

}  // namespace fdv
