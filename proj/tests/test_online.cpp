#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"
#include "fdiv/online/game.hpp"
#include "support.hpp"

using namespace fdv;
using fdv::test::Gen;
using fdv::test::near;

namespace {

struct Example {
  double x, y, w;
};

// Direct loss of g_theta on weighted examples, with theta and x as doubles.
double direct_loss(double theta, const std::vector<Example>& data) {
  double s = 0.0;
  for (const auto& e : data) {
    double g = e.x >= theta ? 1.0 : -1.0;
    s += e.w * 0.5 * (1.0 - g * e.y);
  }
  return s;
}

// Exhaustive minimum over the given candidate thresholds; ties to the smallest.
std::pair<double, double> scan(const std::vector<double>& cands, const std::vector<Example>& data) {
  double best = std::numeric_limits<double>::infinity(), arg = cands.front();
  for (double c : cands) {
    double v = direct_loss(c, data);
    if (v < best - 1e-12) {
      best = v;
      arg = c;
    }
  }
  return {arg, best};
}

std::vector<WeightedExample> to_weighted(const std::vector<Example>& data) {
  std::vector<WeightedExample> out;
  for (const auto& e : data) out.emplace_back(e.x, e.y, e.w);
  return out;
}

// Loss of g_theta on grid cells with per-cell costs.
double cell_cost(double theta, const ContextGrid& grid, const std::vector<Cost>& cells) {
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    s += grid.value(k) >= theta ? cells[k].plus : cells[k].minus;
  }
  return s;
}

std::vector<double> grid_thresholds(const ContextGrid& grid) {
  std::vector<double> c;
  for (std::size_t k = 0; k < grid.size(); ++k) c.push_back(grid.value(k));
  c.push_back(ThresholdClass::kAboveOne);
  return c;
}

}  // namespace

TEST_CASE("dyadic arithmetic") {
  Gen gen(41);
  for (int trial = 0; trial < 500; ++trial) {
    double a = gen.uniform(0.0, 1.999), b = gen.uniform(0.0, 1.999);
    if (gen.coin(0.1)) b = a;
    Dyadic da = Dyadic::from_double(a), db = Dyadic::from_double(b);
    CHECK((da < db) == (a < b));
    CHECK((da == db) == (a == b));
    CHECK(da.approx() == a);
  }
  // 0.1011 in binary
  Dyadic d = Dyadic::from_bits({true, false, true, true});
  CHECK(d.approx() == 0.6875);
  CHECK(d.length() == 4);
  CHECK(d == Dyadic::from_double(0.6875));
  // Deep bisection points stay ordered beyond double precision.
  std::vector<bool> bits(100, false);
  bits[0] = true;
  Dyadic lo = Dyadic::from_bits(bits);
  bits[99] = true;
  Dyadic hi = Dyadic::from_bits(bits);
  CHECK(lo < hi);
  CHECK(lo.approx() == hi.approx());
  CHECK(Dyadic::from_double(1.5) > Dyadic::from_double(1.0));
}

TEST_CASE("erm examples") {
  ThresholdClass cls = ThresholdClass::uniform(11);
  ErmResult r = erm_oracle(cls, to_weighted({{0.3, 1, 1}, {0.7, -1, 1}}));
  CHECK(r.theta.approx() == 0.0);
  CHECK(r.value == 1.0);
  ErmResult empty = erm_oracle(cls, std::vector<WeightedExample>{});
  CHECK(empty.theta.approx() == 0.0);
  CHECK(empty.value == 0.0);
  ErmResult zero = erm_oracle(cls, to_weighted({{0.2, 1, 0}, {0.9, -1, 0}}));
  CHECK(zero.theta.approx() == 0.0);
  CHECK(zero.value == 0.0);
  ErmResult neg = erm_oracle(cls, to_weighted({{0.5, 1, -2}}));
  CHECK(neg.theta.approx() > 0.5);
  CHECK(near(neg.theta.approx(), 0.6, 1e-15));
  CHECK(neg.value == -2.0);
  CHECK_THROWS(ThresholdClass(std::vector<double>{}));
  CHECK_THROWS(ThresholdClass(std::vector<double>{0.5, 0.2}));
}

TEST_CASE("property: erm equals exhaustive scan") {
  Gen gen(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t points = static_cast<std::size_t>(gen.integer(2, 20));
    bool bp = gen.coin();
    ThresholdClass cls = ThresholdClass::uniform(points, bp);
    int n = gen.integer(0, 25);
    std::vector<Example> data;
    for (int i = 0; i < n; ++i) {
      double x = gen.coin(0.5) ? static_cast<double>(gen.integer(0, 19)) / 19.0 : gen.uniform(0.0, 1.0);
      data.push_back({x, gen.coin() ? 1.0 : -1.0, gen.uniform(-2.0, 2.0)});
    }
    std::vector<double> cands = cls.values();
    if (bp) {
      for (const auto& e : data) cands.push_back(e.x);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    auto [arg, best] = scan(cands, data);
    ErmResult r = erm_oracle(cls, to_weighted(data));
    CHECK(near(r.value, best, 1e-9));
    CHECK(near(direct_loss(r.theta.approx(), data), best, 1e-9));
    CHECK(r.theta.approx() == arg);
    CHECK(near(empirical_loss(r.theta, to_weighted(data)), best, 1e-9));
  }
}

TEST_CASE("oracle counting") {
  ThresholdClass cls = ThresholdClass::uniform(5);
  ErmOracle oracle(cls);
  std::vector<WeightedExample> none;
  oracle(std::span<const WeightedExample>(none));
  oracle(std::span<const WeightedExample>(none));
  CHECK(oracle.calls() == 2);
}

TEST_CASE("ftpl with eta = 0 follows the leader") {
  ContextGrid grid(9);
  FtplLearner ftpl(grid, 0.0, 4);
  History h(grid);
  std::vector<Example> data;
  Gen gen(43);
  ErmOracle oracle(grid.learner_class());
  Rng rng = make_rng(1, "ftl");
  for (int t = 0; t < 30; ++t) {
    ftpl.begin_round(t + 1, 30, h, oracle, rng);
    auto [arg, best] = scan(grid_thresholds(grid), data);
    CHECK(ftpl.committed().approx() == arg);
    std::size_t k = static_cast<std::size_t>(gen.integer(0, 8));
    double y = gen.coin(0.7) ? 1.0 : -1.0;
    h.add(grid_context(grid, k), y);
    data.push_back({grid.value(k), y, 1.0});
  }
}

TEST_CASE("property: ftpl argmin equals direct perturbed evaluation") {
  Gen gen(44);
  for (int trial = 0; trial < 100; ++trial) {
    ContextGrid grid(static_cast<std::size_t>(gen.integer(2, 24)));
    double eta = gen.uniform(0.1, 5.0);
    std::int64_t m = gen.coin() ? gen.integer(1, 10) : gen.integer(30, 200);
    FtplLearner ftpl(grid, eta, m);
    History h(grid);
    std::vector<Cost> cells(grid.size());
    int n = gen.integer(0, 15);
    for (int i = 0; i < n; ++i) {
      std::size_t k = static_cast<std::size_t>(gen.integer(0, static_cast<int>(grid.size()) - 1));
      double y = gen.coin() ? 1.0 : -1.0;
      h.add(grid_context(grid, k), y);
      cells[k].add(y, 1.0);
    }
    Rng rng = make_rng(static_cast<std::uint64_t>(trial), "ftpl");
    Rng copy = rng;
    std::vector<Cost> extra;
    ftpl.draw_perturbation(extra, copy);
    // eta omega(g) = (eta/sqrt(m)) sum_k G_k g(z_k), with G_k recovered from
    // the synthetic weights -2 eta G_k / sqrt(m).
    double unit = -2.0 * eta / std::sqrt(static_cast<double>(m));
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (double theta : grid_thresholds(grid)) {
      double v = cell_cost(theta, grid, cells);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        double G = extra[k].minus / unit;
        v += eta / std::sqrt(static_cast<double>(m)) * G * (grid.value(k) >= theta ? 1.0 : -1.0);
      }
      if (v < best - 1e-12) {
        best = v;
        arg = theta;
      }
    }
    ErmOracle oracle(grid.learner_class());
    ftpl.begin_round(1, 10, h, oracle, rng);
    CHECK(ftpl.committed().approx() == arg);
    CHECK(oracle.calls() == 1);
  }
}

TEST_CASE("ftpl perturbation law") {
  // Binned and per-draw paths share the law: total weight has variance
  // 4 eta^2 for any m.
  ContextGrid grid(8);
  for (std::int64_t m : {3, 64, 1000}) {
    FtplLearner ftpl(grid, 1.0, m);
    Rng rng = make_rng(9, "law", static_cast<std::uint64_t>(m));
    std::vector<Cost> extra;
    const int reps = 20000;
    double ss = 0.0;
    for (int r = 0; r < reps; ++r) {
      ftpl.draw_perturbation(extra, rng);
      double s = 0.0;
      for (const auto& c : extra) s += c.minus;
      ss += s * s;
    }
    CHECK(near(ss / reps, 4.0, 0.15));
  }
}

TEST_CASE("relaxation without future rounds predicts zero") {
  ContextGrid grid(16);
  RelaxationLearner rel(grid, 1, 2.0);
  History h(grid);
  ErmOracle oracle(grid.learner_class());
  Rng rng = make_rng(2, "rel");
  double yhat = rel.predict(5, 5, grid_context(grid, 7), h, oracle, rng);
  CHECK(yhat == 0.0);
  CHECK(oracle.calls() == 2);
}

TEST_CASE("property: relaxation equalises the two branches") {
  Gen gen(45);
  for (int trial = 0; trial < 100; ++trial) {
    ContextGrid grid(static_cast<std::size_t>(gen.integer(2, 20)));
    int G = static_cast<int>(grid.size());
    RelaxationLearner rel(grid, gen.integer(1, 3), gen.coin() ? 2.0 : 6.0);
    History h(grid);
    std::vector<Cost> cells(grid.size());
    int n = gen.integer(0, 20);
    for (int i = 0; i < n; ++i) {
      std::size_t k = static_cast<std::size_t>(gen.integer(0, G - 1));
      double y = gen.coin() ? 1.0 : -1.0;
      h.add(grid_context(grid, k), y);
      cells[k].add(y, 1.0);
    }
    Rng rng = make_rng(static_cast<std::uint64_t>(trial), "playout");
    std::vector<Cost> playout;
    rel.draw_playout(gen.integer(0, 40), playout, rng);
    std::size_t xk = static_cast<std::size_t>(gen.integer(0, G - 1));
    ErmOracle oracle(grid.learner_class());
    double vp = 0.0, vm = 0.0;
    double yhat = rel.predict_with_playout(grid_context(grid, xk), h, playout, oracle, &vp, &vm);
    CHECK(yhat >= -1.0);
    CHECK(yhat <= 1.0);

    // V(y) by exhaustive scan.
    auto V = [&](double y) {
      double best = std::numeric_limits<double>::infinity();
      for (double theta : grid_thresholds(grid)) {
        double v = cell_cost(theta, grid, cells) + cell_cost(theta, grid, playout);
        double g = grid.value(xk) >= theta ? 1.0 : -1.0;
        v += 0.5 * (1.0 - g * y);
        best = std::min(best, v);
      }
      return best;
    };
    double Vp = V(1.0), Vm = V(-1.0);
    CHECK(near(vp, Vp, 1e-9));
    CHECK(near(vm, Vm, 1e-9));
    // Phi(y) = C - V(y); C cancels from the comparison.
    auto worst = [&](double p) { return std::max((1.0 - p) / 2.0 - Vp, (1.0 + p) / 2.0 - Vm); };
    double at = worst(yhat);
    for (int i = 0; i <= 100; ++i) {
      double p = -1.0 + 0.02 * i;
      CHECK(at <= worst(p) + 1e-12);
    }
  }
}

TEST_CASE("relaxation playout law") {
  // Each playout draw contributes 2 c eps to one cell, so the total has
  // mean 0 and variance 4 c^2 draws.
  ContextGrid grid(6);
  RelaxationLearner rel(grid, 1, 2.0);
  for (std::int64_t draws : {3, 500}) {
    Rng rng = make_rng(4, "playout", static_cast<std::uint64_t>(draws));
    std::vector<Cost> extra;
    const int reps = 20000;
    double s1 = 0.0, s2 = 0.0;
    for (int r = 0; r < reps; ++r) {
      rel.draw_playout(draws, extra, rng);
      double s = 0.0;
      for (const auto& c : extra) {
        s += c.minus;
        CHECK(c.plus == 0.0);
      }
      s1 += s;
      s2 += s * s;
    }
    double var = 16.0 * static_cast<double>(draws);
    CHECK(std::abs(s1 / reps) <= 4.0 * std::sqrt(var / reps));
    CHECK(near(s2 / reps / var, 1.0, 0.05));
  }
}

TEST_CASE("adversaries emit smooth laws") {
  ContextGrid grid(64);
  for (AdversaryKind kind : {AdversaryKind::smooth_iid, AdversaryKind::adaptive_greedy,
                             AdversaryKind::atom_mixture}) {
    AdversarySpec spec;
    spec.kind = kind;
    spec.sigma = 0.5;
    spec.generator = kind == AdversaryKind::atom_mixture ? Generator::egamma(2) : Generator::renyi(2);
    auto adv = make_adversary(spec, grid, 3);
    FtplLearner learner(grid, 1.0, 8);
    Rng rng = make_rng(3, "adversary/draws");
    for (std::int64_t t = 1; t <= 50; ++t) {
      AdversaryDraw d = adv->step(t, learner, rng);
      CHECK(law_divergence(spec.generator, adv->last_law(), grid) <= 1.0 / spec.sigma + 1e-12);
      CHECK(smoothness_check(spec.generator, adv->last_law(), grid, spec.sigma));
      CHECK((d.y == 1.0 || d.y == -1.0));
    }
  }
  AdversarySpec eg;
  eg.kind = AdversaryKind::atom_mixture;
  eg.generator = Generator::egamma(2);
  eg.sigma = 0.5;
  CHECK(atom_mixture_delta(eg) == 1.0);
  eg.sigma = 2.0;
  CHECK(atom_mixture_delta(eg) == 0.5);
}

TEST_CASE("adaptive greedy with one candidate is smooth_iid") {
  ContextGrid grid(32);
  AdversarySpec iid;
  AdversarySpec greedy;
  greedy.kind = AdversaryKind::adaptive_greedy;
  greedy.K = 1;
  LearnerSpec ls;
  RegretTrace a = run_game(200, iid, ls, grid, 17);
  RegretTrace b = run_game(200, greedy, ls, grid, 17);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    CHECK(a.rounds[i].x == b.rounds[i].x);
    CHECK(a.rounds[i].y == b.rounds[i].y);
  }
}

TEST_CASE("run_game accounting") {
  ContextGrid grid(32);
  AdversarySpec adv;
  for (LearnerKind kind : {LearnerKind::ftpl, LearnerKind::relaxation, LearnerKind::ftl}) {
    LearnerSpec ls;
    ls.kind = kind;
    RegretTrace tr = run_game(150, adv, ls, grid, 5);
    std::int64_t per = kind == LearnerKind::relaxation ? 2 : 1;
    CHECK(tr.calls_per_round == static_cast<double>(per));
    CHECK(tr.oracle_calls == 150 * per + 1);
    CHECK(near(tr.regret, tr.cumulative_loss - tr.best_loss, 1e-12));
    double cum = 0.0;
    std::vector<Example> data;
    for (const auto& r : tr.rounds) {
      CHECK(near(r.loss, 0.5 * (1.0 - r.prediction * r.y), 1e-15));
      cum += r.loss;
      data.push_back({r.x, r.y, 1.0});
    }
    CHECK(near(cum, tr.cumulative_loss, 1e-9));
    std::vector<double> cands = grid_thresholds(grid);
    auto [arg, best] = scan(cands, data);
    CHECK(near(tr.best_loss, best, 1e-9));

    RegretTrace again = run_game(150, adv, ls, grid, 5);
    CHECK(again.regret == tr.regret);
    CHECK(again.rounds.back().prediction == tr.rounds.back().prediction);
    RegretTrace one = run_game(1, adv, ls, grid, 6);
    CHECK(one.regret <= 1.0);
  }
}

TEST_CASE("ftl on a constant stream") {
  ContextGrid grid(16);
  FtplLearner ftl(grid, 0.0, 1, "ftl");
  History h(grid);
  ErmOracle oracle(grid.learner_class());
  Rng rng = make_rng(1, "const");
  double cum = 0.0;
  Context x = grid_context(grid, 8);
  for (int t = 1; t <= 100; ++t) {
    ftl.begin_round(t, 100, h, oracle, rng);
    double yhat = ftl.predict(t, 100, x, h, oracle, rng);
    cum += linear_loss(yhat, -1.0);
    h.add(x, -1.0);
    ftl.end_round();
  }
  // The all-negative hypothesis has zero loss.
  CHECK(cum <= 1.0);
}

TEST_CASE("ftpl commits before seeing the context") {
  ContextGrid grid(16);
  FtplLearner ftpl(grid, 2.0, 16);
  History h(grid);
  ErmOracle oracle(grid.learner_class());
  Rng rng = make_rng(8, "proper");
  ftpl.begin_round(1, 10, h, oracle, rng);
  Dyadic theta = ftpl.committed();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Context x = grid_context(grid, k);
    CHECK(ftpl.predict(1, 10, x, h, oracle, rng) == threshold_predict(theta, x.value));
    CHECK(ftpl.committed() == theta);
  }
  CHECK(oracle.calls() == 1);
}

TEST_CASE("atom mixture forces linear regret") {
  ContextGrid grid(32);
  AdversarySpec adv;
  adv.kind = AdversaryKind::atom_mixture;
  adv.generator = Generator::egamma(1.5);
  adv.sigma = 0.1;
  for (LearnerKind kind : {LearnerKind::ftpl, LearnerKind::relaxation, LearnerKind::ftl}) {
    LearnerSpec ls;
    ls.kind = kind;
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) mean += run_game(300, adv, ls, grid, s).regret / 5.0;
    CHECK(mean >= 0.4 * 300);
  }
}

TEST_CASE("coupling demo") {
  DiscreteDist mu({"0", "0.5", "1"}, std::vector<double>{0.3, 0.3, 0.4});
  CouplingReport same = coupling_demo(mu, mu, Generator::renyi(2), 0.1, 0.01, 100);
  CHECK(same.tv == 0.0);
  CHECK(same.ok);
  DiscreteDist p({"0", "0.5", "1"}, std::vector<double>{0.6, 0.3, 0.1});
  CouplingReport r = coupling_demo(p, mu, Generator::renyi(2), 0.1, 0.01, 100);
  CHECK(r.tv <= 0.1);
  CHECK(r.ok);
  CHECK(r.n_used >= r.plan_n);
  CHECK(static_cast<double>(r.n_used) >= r.coupling_n);
  CHECK_THROWS_AS(coupling_demo(p, mu, Generator::tv(), 0.1, 0.01, 100), UnboundedTruncation);
}
