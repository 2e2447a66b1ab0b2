#pragma once

#include <Eigen/Core>

#include "fdiv/discrete_dist.hpp"
#include "fdiv/generator.hpp"

namespace fdv {

/*
 * D_f(nu || mu) = sum_{mu(x) > 0} mu(x) f(nu(x)/mu(x)) + f'(inf) nu(mu = 0)
 *
 * The singular term uses 0 * inf = 0. Atoms with both masses zero contribute
 * nothing.
 */
ExtendedReal divergence(const Generator& g, const DiscreteDist& nu, const DiscreteDist& mu);

// Same sum over pre-aligned mass vectors, plus `extra_singular` nu-mass that
// sits on atoms outside both vectors.
ExtendedReal divergence_aligned(const Generator& g, const Eigen::VectorXd& nu,
                                const Eigen::VectorXd& mu, double extra_singular = 0.0);

// sum_{mu > 0} (nu - gamma mu)_+ + nu(mu = 0)
double egamma(const DiscreteDist& nu, const DiscreteDist& mu, double gamma);

// sup_A |nu(A) - mu(A)| = half the L1 distance.
double tv_distance(const DiscreteDist& nu, const DiscreteDist& mu);

// nu-mass where nu/mu > M, counting mass off supp(mu) as ratio +inf.
double ratio_tail_mass(const DiscreteDist& nu, const DiscreteDist& mu, double M);

// As above, and throws InvariantViolation unless the tail mass is at most
// 2 D_f / f'(M/2) whenever M >= 2 and that bound is finite.
double ratio_tail_mass(const Generator& g, const DiscreteDist& nu, const DiscreteDist& mu,
                       double M);

}  // namespace fdv
