#include <doctest.h>

#include <cmath>
#include <limits>

#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"
#include "support.hpp"

using namespace fdv;
using fdv::test::Gen;
using fdv::test::near;

namespace {

const double kInfinity = std::numeric_limits<double>::infinity();

DiscreteDist two(double a, double b) { return DiscreteDist({"a", "b"}, std::vector<double>{a, b}); }

// Direct oracle: generator formulas written out again, summed over the
// label union with the singular term nu(mu = 0) f'(inf).
double f_oracle(const Generator& g, double x) {
  switch (g.kind()) {
    case GeneratorKind::TV: return std::abs(x - 1.0) - (x - 1.0);
    case GeneratorKind::KL: return x == 0.0 ? 1.0 : x * std::log(x) - x + 1.0;
    case GeneratorKind::Renyi: {
      double l = g.param();
      return std::pow(x, l) - l * x + l - 1.0;
    }
    case GeneratorKind::EGamma: return std::max(x - g.param(), 0.0);
  }
  return 0.0;
}

double slope_at_infinity(const Generator& g) {
  switch (g.kind()) {
    case GeneratorKind::TV: return 0.0;
    case GeneratorKind::EGamma: return 1.0;
    default: return kInfinity;
  }
}

double divergence_oracle(const Generator& g, const DiscreteDist& nu, const DiscreteDist& mu) {
  auto n = fdv::test::as_map(nu);
  auto m = fdv::test::as_map(mu);
  double sum = 0.0, singular = 0.0;
  for (auto& [label, mass] : m) {
    if (mass > 0.0) sum += mass * f_oracle(g, (n.count(label) ? n[label] : 0.0) / mass);
  }
  for (auto& [label, mass] : n) {
    if (mass > 0.0 && !(m.count(label) && m[label] > 0.0)) singular += mass;
  }
  if (singular > 0.0) sum += singular * slope_at_infinity(g);
  return sum;
}

}  // namespace

TEST_CASE("generator values") {
  CHECK(eval_f(Generator::kl(), 1.0) == 0.0);
  CHECK(near(eval_f(Generator::renyi(2), 3.0), 4.0, 1e-12));
  CHECK(eval_f(Generator::tv(), 0.0) == 2.0);
  CHECK(eval_f(Generator::egamma(2), 1.5) == 0.0);
  CHECK_THROWS_AS(eval_f(Generator::kl(), -1.0), DomainError);
}

TEST_CASE("generator derivatives") {
  CHECK(near(eval_fprime(Generator::kl(), std::exp(1.0)), 1.0, 1e-12));
  CHECK(eval_fprime(Generator::tv(), 2.0) == 0.0);
  CHECK(near(eval_fprime(Generator::renyi(2), 4.0), 6.0, 1e-12));
  CHECK(fprime_at_infinity(Generator::tv()) == 0.0);
  CHECK(fprime_at_infinity(Generator::kl()) == kInfinity);
  CHECK(fprime_at_infinity(Generator::renyi(3)) == kInfinity);
  CHECK(fprime_at_infinity(Generator::egamma(2)) == 1.0);
  CHECK_THROWS_AS(eval_fprime(Generator::kl(), 0.0), DomainError);
  // Kinks take the right derivative.
  CHECK(eval_fprime(Generator::tv(), 1.0) == 0.0);
  CHECK(eval_fprime(Generator::egamma(2), 2.0) == 1.0);
  CHECK(eval_fprime(Generator::egamma(1), 1.0) == 1.0);
}

TEST_CASE("inverse derivative values") {
  CHECK(inv_fprime(Generator::kl(), 0.0) == 1.0);
  CHECK(near(inv_fprime(Generator::kl(), std::log(4.0)), 4.0, 1e-12));
  CHECK(near(inv_fprime(Generator::renyi(2), 6.0), 4.0, 1e-12));
  CHECK(inv_fprime(Generator::tv(), 0.5) == kInfinity);
  CHECK(inv_fprime(Generator::tv(), 0.0) == 1.0);
  CHECK(inv_fprime(Generator::egamma(2), 0.0) == 1.0);
  CHECK(inv_fprime(Generator::egamma(2), 0.5) == 2.0);
  CHECK(inv_fprime(Generator::egamma(2), 1.0) == 2.0);
  CHECK(inv_fprime(Generator::egamma(2), 1.5) == kInfinity);
}

TEST_CASE("generator parsing") {
  CHECK(Generator::parse("kl").kind() == GeneratorKind::KL);
  CHECK(Generator::parse("tv").kind() == GeneratorKind::TV);
  CHECK(Generator::parse("renyi:2").param() == 2.0);
  CHECK(Generator::parse("egamma:1.5").param() == 1.5);
  CHECK_THROWS_AS(Generator::parse("renyi:1"), DomainError);
  CHECK_THROWS_AS(Generator::parse("egamma:0.5"), DomainError);
  CHECK_THROWS_AS(Generator::parse("hellinger"), DomainError);
  CHECK_THROWS_AS(Generator::parse("renyi:x"), DomainError);
}

TEST_CASE("property: generator shape") {
  Gen gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    Generator g = gen.generator();
    CHECK(eval_f(g, 1.0) == 0.0);
    double a = gen.uniform(0.01, 10.0), b = gen.uniform(0.01, 10.0);
    if (a > b) std::swap(a, b);
    CHECK(eval_fprime(g, a) <= eval_fprime(g, b) + 1e-12);
    double mid = eval_f(g, 0.5 * (a + b));
    CHECK(mid <= 0.5 * (eval_f(g, a) + eval_f(g, b)) + 1e-9 * (1.0 + std::abs(mid)));
    CHECK(near(eval_f(g, a), f_oracle(g, a), 1e-9 * (1.0 + std::abs(f_oracle(g, a)))));
  }
  for (Generator g : {Generator::tv(), Generator::kl(), Generator::renyi(1.5), Generator::egamma(2)}) {
    CHECK(eval_fprime(g, 1.0) == 0.0);
  }
}

TEST_CASE("property: inverse derivative round trip") {
  Gen gen(12);
  for (int trial = 0; trial < 300; ++trial) {
    Generator g = gen.generator();
    double u = std::exp(gen.uniform(-8.0, 3.0));
    double t = inv_fprime(g, u);
    if (!std::isfinite(t)) {
      // Empty set: f' stays below u everywhere sampled.
      for (double s : {0.5, 1.0, 10.0, 1e3, 1e6}) CHECK(eval_fprime(g, s) < u);
      continue;
    }
    CHECK(eval_fprime(g, t) >= u - 1e-9 * (1.0 + u));
    CHECK(eval_fprime(g, t * (1.0 - 1e-9)) < u + 1e-9);
  }
}

TEST_CASE("divergence examples") {
  DiscreteDist nu = DiscreteDist::bernoulli(0.75), mu = DiscreteDist::bernoulli(0.5);
  CHECK(near(divergence(Generator::renyi(2), nu, mu), 0.25, 1e-12));
  CHECK(near(divergence(Generator::kl(), nu, mu), 0.75 * std::log(1.5) + 0.25 * std::log(0.5), 1e-12));
  CHECK(near(divergence(Generator::kl(), nu, mu), 0.130812, 5e-7));
  CHECK(divergence(Generator::kl(), mu, mu) == 0.0);
  CHECK(divergence(Generator::kl(), DiscreteDist::point("z"), mu) == kInfinity);
  CHECK(divergence(Generator::egamma(2), DiscreteDist::point("z"), mu) == 1.0);
  CHECK(divergence(Generator::tv(), DiscreteDist::point("z"), mu) == 2.0);
}

TEST_CASE("egamma and tv examples") {
  DiscreteDist mu = DiscreteDist::bernoulli(0.5);
  CHECK(egamma(mu, mu, 1.0) == 0.0);
  CHECK(near(egamma(DiscreteDist::bernoulli(0.2), DiscreteDist::bernoulli(0.02), 5.0), 0.1, 1e-12));
  CHECK(near(egamma(two(0.95, 0.05), two(0.5, 0.5), 1.5), 0.2, 1e-12));
  CHECK(tv_distance(mu, mu) == 0.0);
  CHECK(near(tv_distance(DiscreteDist::bernoulli(0.8), mu), 0.3, 1e-12));
  CHECK(tv_distance(DiscreteDist::point("a"), DiscreteDist::point("b")) == 1.0);
}

TEST_CASE("ratio tail examples") {
  DiscreteDist mu = two(0.5, 0.5);
  CHECK(ratio_tail_mass(mu, mu, 2.0) == 0.0);
  CHECK(ratio_tail_mass(two(0.8, 0.2), mu, 2.0) == 0.0);
  CHECK(near(ratio_tail_mass(two(0.9, 0.1), two(0.25, 0.75), 3.0), 0.9, 1e-12));
  CHECK(ratio_tail_mass(DiscreteDist::point("z"), mu, 4.0) == 1.0);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(DiscreteDist({"a", "b"}, std::vector<double>{0.5, 0.6}), DataError);
  CHECK_THROWS_AS(DiscreteDist({"a", "a"}, std::vector<double>{0.5, 0.5}), DataError);
  CHECK_THROWS_AS(DiscreteDist({"a", "b"}, std::vector<double>{1.5, -0.5}), DataError);
  DiscreteDist d({"a", "b"}, std::vector<double>{0.5, 0.5 + 5e-10});
  CHECK(near(d.masses().sum(), 1.0, 1e-15));
}

TEST_CASE("property: divergence matches the summation oracle") {
  Gen gen(13);
  for (int trial = 0; trial < 400; ++trial) {
    Generator g = gen.generator();
    int k = gen.integer(1, 6);
    DiscreteDist nu = gen.dist(k, 0.3);
    DiscreteDist mu = gen.dist(k, 0.3);
    double d = divergence(g, nu, mu);
    double o = divergence_oracle(g, nu, mu);
    CHECK(d >= 0.0);
    CHECK(near(d, o, 1e-10 * (1.0 + std::abs(o))));
  }
}

TEST_CASE("property: zero exactly on equal pairs for strictly convex kinds") {
  Gen gen(14);
  for (int trial = 0; trial < 200; ++trial) {
    Generator g = gen.coin() ? Generator::kl() : Generator::renyi(gen.uniform(1.1, 4.0));
    int k = gen.integer(2, 6);
    DiscreteDist nu = gen.dist(k), mu = gen.dist(k);
    CHECK(divergence(g, mu, mu) == doctest::Approx(0.0).epsilon(1e-12));
    bool same = (nu.masses() - mu.masses()).cwiseAbs().maxCoeff() < 1e-12;
    if (!same) CHECK(divergence(g, nu, mu) > 0.0);
  }
}

TEST_CASE("property: coarsening never increases divergence") {
  Gen gen(15);
  for (int trial = 0; trial < 300; ++trial) {
    Generator g = gen.generator();
    int k = gen.integer(3, 7);
    auto nu_m = gen.masses(k, 0.2), mu_m = gen.masses(k, 0.2);
    auto labels = Gen::labels(k);
    int i = gen.integer(0, k - 2);
    // Merge atoms i and i+1.
    std::vector<double> cn, cm;
    std::vector<std::string> cl;
    for (int j = 0; j < k; ++j) {
      if (j == i + 1) {
        cn.back() += nu_m[static_cast<std::size_t>(j)];
        cm.back() += mu_m[static_cast<std::size_t>(j)];
        continue;
      }
      cn.push_back(nu_m[static_cast<std::size_t>(j)]);
      cm.push_back(mu_m[static_cast<std::size_t>(j)]);
      cl.push_back(labels[static_cast<std::size_t>(j)]);
    }
    double fine = divergence(g, DiscreteDist(labels, nu_m), DiscreteDist(labels, mu_m));
    double coarse = divergence(g, DiscreteDist(cl, cn), DiscreteDist(cl, cm));
    if (std::isinf(fine)) continue;
    CHECK(coarse <= fine + 1e-12 * (1.0 + fine));
  }
}

TEST_CASE("property: egamma identities") {
  Gen gen(16);
  for (int trial = 0; trial < 300; ++trial) {
    int k = gen.integer(1, 6);
    DiscreteDist nu = gen.dist(k, 0.3), mu = gen.dist(k, 0.3);
    CHECK(near(egamma(nu, mu, 1.0), tv_distance(nu, mu), 1e-12));
    double g1 = gen.uniform(1.0, 5.0), g2 = g1 + gen.uniform(0.0, 3.0);
    CHECK(egamma(nu, mu, g2) <= egamma(nu, mu, g1) + 1e-15);
    CHECK(near(egamma(nu, mu, g1), divergence(Generator::egamma(g1), nu, mu), 1e-12));
    CHECK(near(divergence(Generator::tv(), nu, mu), 2.0 * tv_distance(nu, mu), 1e-12));
  }
}

TEST_CASE("property: ratio tail mass bound") {
  Gen gen(17);
  for (int trial = 0; trial < 300; ++trial) {
    Generator g = gen.coin() ? Generator::kl() : Generator::renyi(gen.uniform(1.1, 4.0));
    int k = gen.integer(2, 8);
    DiscreteDist nu = gen.dist(k), mu = gen.dist(k);
    for (double M : {2.0, 4.0, 8.0, 16.0}) {
      double tail = ratio_tail_mass(g, nu, mu, M);
      double bound = 2.0 * divergence(g, nu, mu) / eval_fprime(g, M / 2.0);
      if (std::isfinite(bound)) CHECK(tail <= bound + 1e-12);
    }
  }
}

TEST_CASE("json round trip") {
  Gen gen(18);
  for (int trial = 0; trial < 50; ++trial) {
    DiscreteDist d = gen.dist(gen.integer(1, 10), 0.2);
    CHECK(dist_from_json(dist_to_json(d)) == d);
    CHECK(dist_from_json(nlohmann::json::parse(dist_to_json(d).dump())) == d);
  }
  CHECK_THROWS_AS(dist_from_json(nlohmann::json::parse(R"({"a": 1})")), Error);
}
