#pragma once

#include <cstdint>

#include "fdiv/generator.hpp"

namespace fdv {

/*
 * Sample-complexity and regret bound evaluators. Universal constants are
 * set to 1 where the source only states orders of growth; these values are
 * order bounds, not exact constants.
 */

// ceil( max( (2/(1-eps)) log(2/eps) (f')^{-1}(4D/eps), 2 ) ), +inf if the
// inverse is infinite.
ExtendedReal upper_bound_n(const Generator& g, double D, double eps);

// (1/2) (f')^{-1}(delta / (2 eps)). Needs eps <= 1/4 and delta > 2 f(1/2).
ExtendedReal lower_bound_n(const Generator& g, double delta, double eps);

// (zeta^{1+zeta}/8) (D/f'(n))^{1+zeta}; KL and Renyi only.
double lower_bound_tv(const Generator& g, double D, double n, double zeta);

// ceil( (1/(1-eps)) log(T/delta) (f')^{-1}(1/(eps sigma)) )
ExtendedReal coupling_n(const Generator& g, double sigma, double eps, double delta,
                        std::int64_t T);

struct BoundQuery {
  Generator generator = Generator::kl();
  double sigma = 1.0;
  std::int64_t T = 1;
  std::int64_t d = 1;
};

struct RegretBounds {
  double minimax;
  double improper;
  double ftpl;
};

// Grid for the inner minimisations: 200 log-spaced points in [1e-6, 1).
inline constexpr int kRegretGridPoints = 200;

/*
 * minimax  = min_eps  eps T + sqrt(T d log(T (f')^{-1}(1/(eps sigma)))) + sqrt(T log T d)
 * improper = min_alpha alpha T + sqrt(d T log T (f')^{-1}(1/(alpha sigma)))
 * ftpl     = sqrt(d) T^{(2l+1)/(4l-1)} sigma^{-1/(4l-1)}   (Renyi-l only)
 *
 * Each is capped at T, the trivial bound for losses in [0,1]. For generators
 * other than Renyi the ftpl value is the trivial bound T.
 */
RegretBounds regret_bounds(const BoundQuery& q);

}  // namespace fdv
