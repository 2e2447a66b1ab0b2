#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fdiv/discrete_dist.hpp"
#include "fdiv/generator.hpp"
#include "fdiv/rng.hpp"

namespace fdv {

enum class Fallback { uniform_index, fixed_first };

struct SamplerPlan {
  double M = 1.0;
  std::int64_t n = 1;
  Fallback fallback = Fallback::uniform_index;
};

struct SamplerOutcome {
  std::size_t chosen_index = 1;  // 1-based
  bool accepted = false;
  std::vector<std::string> draws;
};

using RatioMap = std::unordered_map<std::string, double>;

// M = 2 (f')^{-1}(4D/eps), n = upper_bound_n(g, D, eps).
SamplerPlan make_plan(const Generator& g, double D, double eps);

// nu/mu on supp(mu).
RatioMap likelihood_ratio(const DiscreteDist& nu, const DiscreteDist& mu);

/*
 * Truncated rejection sampling. Draw n labels iid from mu; accept draw j
 * with probability (r_j / M) 1[r_j <= M]; return the first accepted draw,
 * otherwise fall back per the plan.
 */
SamplerOutcome rejection_select(const DiscreteDist& mu, const RatioMap& ratio,
                                const SamplerPlan& plan, std::uint64_t seed);

// Index-level variant used by the estimators: returns the chosen atom index.
std::size_t rejection_select_index(const Categorical& mu, const std::vector<double>& ratio,
                                   const SamplerPlan& plan, Rng& rng);

struct OutputLaw {
  DiscreteDist law;
  double tv_to_target;
  double acceptance;  // a = nu(r <= M) / M
  double q;           // 1 - (1 - a)^n
};

/*
 * Exact law of the selected draw:
 *   q nu_M + (1 - q) mu_rej,
 *   nu_M(x)   = nu(x) 1[r(x) <= M] / nu(r <= M),
 *   mu_rej(x) = mu(x) (1 - acc(x)) / (1 - a).
 * Given that no draw is accepted, each draw is distributed as mu_rej, so the
 * uniform and fixed-first fallbacks give the same law.
 */
OutputLaw exact_output_law(const DiscreteDist& nu, const DiscreteDist& mu, double M,
                           std::int64_t n);

struct ClampResult {
  DiscreteDist nu_tilde;
  double tv_min;
};

// min(nu, gamma mu) with the removed mass poured, in ascending label order,
// onto atoms that still have room under gamma mu.
ClampResult clamp_projection(const DiscreteDist& nu, const DiscreteDist& mu, double gamma);

using SelectionRule = std::function<std::size_t(std::span<const std::string>)>;

// Exact law of X_{rule(X_1..X_n)} by enumerating supp(mu)^n. The rule
// returns a 0-based index. Throws InvariantViolation if the law/mu ratio
// exceeds n.
DiscreteDist brute_force_output_law(const DiscreteDist& mu, const SelectionRule& rule,
                                    int n);

}  // namespace fdv
