#include "fdiv/witness.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"

namespace fdv {

BernoulliWitness bernoulli_witness(const Generator& g, double eps, int n) {
  require(eps > 0.0 && eps <= 0.25, "bernoulli_witness needs 0 < eps <= 1/4");
  require(n >= 1, "bernoulli_witness needs n >= 1");
  const double nd = static_cast<double>(n);
  DiscreteDist mu = DiscreteDist::bernoulli(eps / nd);
  DiscreteDist nu = DiscreteDist::bernoulli(2.0 * eps);
  double e = egamma(nu, mu, nd);
  if (std::abs(e - eps) > 1e-12) {
    throw InvariantViolation("E_n of the Bernoulli pair is " + std::to_string(e));
  }
  double bound = 2.0 * eps * g.fprime(2.0 * nd) + g.f(0.5);
  double d = divergence(g, nu, mu);
  if (!(d <= bound * (1.0 + 1e-12) + 1e-15)) {
    throw InvariantViolation("divergence exceeds 2 eps f'(2n) + f(1/2)");
  }
  return {std::move(mu), std::move(nu), e, bound, d};
}

LinearWitness linear_witness(const Generator& g, double eps) {
  require(eps > 0.0 && eps < 1.0, "linear_witness needs 0 < eps < 1");
  DiscreteDist nu({"a", "b"}, std::vector<double>{eps, 1.0 - eps});
  DiscreteDist mu = DiscreteDist::point("b");
  double d = divergence(g, nu, mu);
  bool warn = !std::isfinite(g.fprime_at_infinity());
  if (!warn) {
    double closed = g.f(1.0 - eps) + eps * g.fprime_at_infinity();
    if (std::abs(d - closed) > 1e-12) {
      throw InvariantViolation("linear witness divergence differs from f(1-eps) + eps f'(inf)");
    }
  }
  return {std::move(mu), std::move(nu), d, eps, warn};
}

RatioLaw::RatioLaw(const Generator& g, double zeta, double delta)
    : g_(g), zeta_(zeta), delta_(delta) {
  if (!g.superlinear()) throw UnsupportedKind("ratio law needs a KL or Renyi generator");
  require(zeta > 0.0, "ratio law needs zeta > 0");
  require(delta > 0.0, "ratio law needs delta > 0");
  beta_ = (1.0 + zeta) * std::pow(delta, 1.0 + zeta);
  t0_ = g.inv_fprime(delta);
}

double RatioLaw::log_fprime_at_log(double s) const {
  if (g_.kind() == GeneratorKind::KL) return std::log(s);
  double l = g_.param();
  // f'(e^s) = l (e^{(l-1)s} - 1)
  return std::log(l) + std::log(std::expm1((l - 1.0) * s));
}

double RatioLaw::log_fsecond_at_log(double s) const {
  if (g_.kind() == GeneratorKind::KL) return -s;
  double l = g_.param();
  return std::log(l * (l - 1.0)) + (l - 2.0) * s;
}

double RatioLaw::log_integrand(double s) const {
  return std::log(beta_) + log_fsecond_at_log(s) - (2.0 + zeta_) * log_fprime_at_log(s) + s;
}

double RatioLaw::survival(double t) const {
  double u = std::max(t, t0_);
  return beta_ * g_.fsecond(u) / std::pow(g_.fprime(u), 2.0 + zeta_);
}

double RatioLaw::tail_integral(double from) const {
  require(from >= t0_ * (1.0 - 1e-12), "tail_integral needs from >= t0");
  return beta_ / ((1.0 + zeta_) * std::pow(g_.fprime(from), 1.0 + zeta_));
}

double RatioLaw::tail_quadrature(double from) const {
  require(from >= t0_ * (1.0 - 1e-12) && from > 1.0, "tail_quadrature needs from >= t0 > 1");
  const double s0 = std::log(from);
  auto remainder = [&](double s) {
    return std::exp(std::log(beta_) - std::log1p(zeta_) - (1.0 + zeta_) * log_fprime_at_log(s));
  };
  double width = 1.0;
  double s_max = s0 + width;
  while (remainder(s_max) >= 1e-9) {
    width *= 2.0;
    s_max = s0 + width;
  }
  auto integrand = [&](double s) { return std::exp(log_integrand(s)); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  double lo = s0;
  double step = 0.5;
  while (lo < s_max) {
    double hi = std::min(s_max, lo + step);
    total += GK::integrate(integrand, lo, hi, 15, 1e-13);
    lo = hi;
    step *= 2.0;
  }
  return total + remainder(s_max);
}

double SuperlinearWitness::e_n_lower(double n) const {
  require(n > law.t0(), "e_n_lower needs n > t0");
  const Generator& g = law.generator();
  double fp = g.fprime(n);
  double z = law.zeta();
  return law.beta() / ((1.0 + z) * std::pow(fp, 1.0 + z)) -
         n * law.beta() * g.fsecond(n) / std::pow(fp, 2.0 + z);
}

double SuperlinearWitness::packaged_bound(double n) const {
  double z = law.zeta();
  return std::pow(z * df_upper / law.generator().fprime(n), 1.0 + z) / 8.0;
}

double SuperlinearWitness::e_n_exact(double n) const { return law.tail_integral(n); }

double SuperlinearWitness::final_condition(double n) const {
  const Generator& g = law.generator();
  return n * g.fsecond(n) / std::pow(g.fprime(n), 1.0 + law.zeta());
}

namespace {

// Smallest t on a log grid past which t f''(t) / f'(t)^{2+zeta} never
// increases again (up to t = e^{2000}).
double detect_growth_threshold(const RatioLaw& law) {
  constexpr int kPoints = 4000;
  const double s_lo = 1e-6, s_hi = 2000.0;
  std::vector<double> s(kPoints), h(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    s[k] = s_lo * std::pow(s_hi / s_lo, static_cast<double>(k) / (kPoints - 1));
    // log of t f''(t)/f'(t)^{2+zeta} at t = e^s, up to the constant log beta
    h[k] = law.log_integrand(s[k]);
  }
  int last_rise = -1;
  for (int k = 1; k < kPoints; ++k) {
    if (h[k] > h[k - 1] + 1e-12 * std::max(1.0, std::abs(h[k - 1]))) last_rise = k;
  }
  return std::exp(s[static_cast<std::size_t>(last_rise + 1 < kPoints ? last_rise + 1 : kPoints - 1)]);
}

}  // namespace

SuperlinearWitness superlinear_witness(const Generator& g, double zeta, double delta) {
  RatioLaw law(g, zeta, delta);
  require(g.f(0.0) <= (1.0 + zeta) * delta / zeta,
          "superlinear_witness needs f(0) <= (1+zeta) delta / zeta");
  double threshold = detect_growth_threshold(law);
  if (law.t0() < threshold) {
    throw GrowthConditionError("t0 = " + std::to_string(law.t0()) +
                               " lies below the detected growth threshold " +
                               std::to_string(threshold));
  }
  double q = law.tail_quadrature(law.t0());
  double full = law.t0() * law.survival(law.t0()) + q;
  return {law, 2.0 * (1.0 + zeta) * delta / zeta, q, full, threshold};
}

}  // namespace fdv
