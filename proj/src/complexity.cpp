#include "fdiv/complexity.hpp"

#include <algorithm>
#include <cmath>

#include "fdiv/errors.hpp"

namespace fdv {

namespace {

double ceil_finite(double x) { return std::isfinite(x) ? std::ceil(x) : kInf; }

double grid_point(int k) {
  return std::pow(10.0, -6.0 + 6.0 * static_cast<double>(k) / kRegretGridPoints);
}

}  // namespace

ExtendedReal upper_bound_n(const Generator& g, double D, double eps) {
  require(eps > 0.0 && eps < 1.0, "upper_bound_n needs 0 < eps < 1");
  require(D >= 0.0, "upper_bound_n needs D >= 0");
  double inv = g.inv_fprime(4.0 * D / eps);
  if (!std::isfinite(inv)) return kInf;
  double n = (2.0 / (1.0 - eps)) * std::log(2.0 / eps) * inv;
  return ceil_finite(std::max(n, 2.0));
}

ExtendedReal lower_bound_n(const Generator& g, double delta, double eps) {
  require(eps > 0.0 && eps <= 0.25, "lower_bound_n needs 0 < eps <= 1/4");
  require(delta > 2.0 * g.f(0.5), "lower_bound_n needs delta > 2 f(1/2)");
  return 0.5 * g.inv_fprime(delta / (2.0 * eps));
}

double lower_bound_tv(const Generator& g, double D, double n, double zeta) {
  if (!g.superlinear()) throw UnsupportedKind("lower_bound_tv needs a KL or Renyi generator");
  require(n >= 1.0, "lower_bound_tv needs n >= 1");
  require(zeta > 0.0, "lower_bound_tv needs zeta > 0");
  require(D >= 0.0, "lower_bound_tv needs D >= 0");
  if (D == 0.0) return 0.0;
  double slope = g.fprime(n);
  if (slope <= 0.0) return kInf;
  double a = std::pow(zeta, 1.0 + zeta) / 8.0 * std::pow(D / slope, 1.0 + zeta);
  double b = std::pow(zeta * D / slope, 1.0 + zeta) / 8.0;
  if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(b))) {
    throw InvariantViolation("lower_bound_tv forms disagree");
  }
  return a;
}

ExtendedReal coupling_n(const Generator& g, double sigma, double eps, double delta,
                        std::int64_t T) {
  require(eps > 0.0 && eps < 1.0, "coupling_n needs 0 < eps < 1");
  require(delta > 0.0 && delta < 1.0, "coupling_n needs 0 < delta < 1");
  require(sigma > 0.0 && sigma <= 1.0, "coupling_n needs sigma in (0,1]");
  require(T >= 1, "coupling_n needs T >= 1");
  double inv = g.inv_fprime(1.0 / (eps * sigma));
  if (!std::isfinite(inv)) return kInf;
  return ceil_finite((1.0 / (1.0 - eps)) * std::log(static_cast<double>(T) / delta) * inv);
}

RegretBounds regret_bounds(const BoundQuery& q) {
  require(q.sigma > 0.0 && q.sigma <= 1.0, "regret_bounds needs sigma in (0,1]");
  require(q.T >= 1, "regret_bounds needs T >= 1");
  require(q.d >= 1, "regret_bounds needs d >= 1");
  const double T = static_cast<double>(q.T);
  const double d = static_cast<double>(q.d);
  const double logT = std::log(T);
  const Generator& g = q.generator;

  double minimax = kInf;
  double improper = kInf;
  for (int k = 0; k < kRegretGridPoints; ++k) {
    double e = grid_point(k);
    double inv = g.inv_fprime(1.0 / (e * q.sigma));
    if (!std::isfinite(inv)) continue;
    double mm = e * T + std::sqrt(T * d * std::max(0.0, std::log(T * inv))) +
                std::sqrt(T * logT * d);
    double im = e * T + std::sqrt(d * T * logT * inv);
    minimax = std::min(minimax, mm);
    improper = std::min(improper, im);
  }

  double ftpl = T;
  if (g.kind() == GeneratorKind::Renyi) {
    double l = g.param();
    ftpl = std::sqrt(d) * std::pow(T, (2.0 * l + 1.0) / (4.0 * l - 1.0)) *
           std::pow(q.sigma, -1.0 / (4.0 * l - 1.0));
  }
  return {std::min(minimax, T), std::min(improper, T), std::min(ftpl, T)};
}

}  // namespace fdv
