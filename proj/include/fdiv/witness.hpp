#pragma once

#include "fdiv/discrete_dist.hpp"
#include "fdiv/generator.hpp"

namespace fdv {

struct BernoulliWitness {
  DiscreteDist mu;      // Ber(eps / n)
  DiscreteDist nu;      // Ber(2 eps)
  double e_n;           // E_n(nu || mu), equal to eps
  double df_bound;      // 2 eps f'(2n) + f(1/2)
  double divergence;    // D_f(nu || mu), at most df_bound
};

BernoulliWitness bernoulli_witness(const Generator& g, double eps, int n);

struct LinearWitness {
  DiscreteDist mu;   // point mass on "b"
  DiscreteDist nu;   // eps on "a", 1 - eps on "b"
  double df_value;   // f(1 - eps) + eps f'(inf)
  double tv_floor;   // eps: no nu' << mu can reach "a"
  bool warning;      // set when f'(inf) = inf, so df_value is infinite
};

LinearWitness linear_witness(const Generator& g, double eps);

/*
 * Law of a likelihood ratio R with survival function
 *
 *   P(R > t) = S(t) = beta f''(t) / f'(t)^{2+zeta}      t >= t0 = (f')^{-1}(delta)
 *   P(R > t) = S(t0)                                    0 <= t < t0
 *
 * and beta = (1+zeta) delta^{1+zeta}, so that int_{t0}^inf S = 1. For
 * n >= t0 the tail integral has the closed form
 *
 *   int_n^inf S = beta / ((1+zeta) f'(n)^{1+zeta}).
 */
class RatioLaw {
 public:
  RatioLaw(const Generator& g, double zeta, double delta);

  const Generator& generator() const { return g_; }
  double zeta() const { return zeta_; }
  double delta() const { return delta_; }
  double beta() const { return beta_; }
  double t0() const { return t0_; }

  double survival(double t) const;
  double atom_at_zero() const { return 1.0 - survival(t0_); }
  // Closed form of int_from^inf S for from >= t0.
  double tail_integral(double from) const;
  // Adaptive Gauss-Kronrod on [from, T_max] in log t, plus the closed-form
  // remainder beyond T_max (chosen below 1e-9).
  double tail_quadrature(double from) const;

  // log S(e^s) + s, the integrand after substituting t = e^s.
  double log_integrand(double s) const;
  double log_fprime_at_log(double s) const;

 private:
  double log_fsecond_at_log(double s) const;
  Generator g_;
  double zeta_, delta_, beta_, t0_;
};

struct SuperlinearWitness {
  RatioLaw law;
  double df_upper;          // 2 (1+zeta) delta / zeta
  double quadrature_mean;   // int_{t0}^inf S by quadrature; 1 by construction
  double full_mean;         // t0 S(t0) + int_{t0}^inf S, mean of the flat-extended law
  double growth_threshold;  // detected start of monotone t f''/f'^{2+zeta}

  // beta/((1+zeta) f'(n)^{1+zeta}) - n beta f''(n)/f'(n)^{2+zeta}, n > t0
  double e_n_lower(double n) const;
  // (1/8)(zeta df_upper / f'(n))^{1+zeta}
  double packaged_bound(double n) const;
  // E_n for the law: int_n^inf S, closed form
  double e_n_exact(double n) const;
  // n f''(n) / f'(n)^{1+zeta}; the derivation needs this below 1/4
  double final_condition(double n) const;
};

SuperlinearWitness superlinear_witness(const Generator& g, double zeta, double delta);

}  // namespace fdv
