#include <algorithm>
#include <cmath>

#include "fdiv/complexity.hpp"
#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"
#include "fdiv/online/game.hpp"
#include "fdiv/sampler.hpp"

namespace fdv {

RegretTrace run_game(std::int64_t T, const AdversarySpec& adversary_spec,
                     const LearnerSpec& learner_spec, const ContextGrid& grid,
                     std::uint64_t seed) {
  require(T >= 1, "run_game needs T >= 1");
  auto learner = make_learner(learner_spec, grid, adversary_spec.generator,
                              adversary_spec.sigma, T);
  auto adversary = make_adversary(adversary_spec, grid, seed);
  Rng adv_rng = make_rng(seed, "adversary/draws");
  Rng learner_rng = make_rng(seed, "learner");
  ErmOracle oracle(grid.learner_class());
  History history(grid);

  RegretTrace trace;
  trace.seed = seed;
  trace.learner = learner->name();
  trace.rounds.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 1; t <= T; ++t) {
    // proper learners commit before the context of round t is drawn
    learner->begin_round(t, T, history, oracle, learner_rng);
    AdversaryDraw d = adversary->step(t, *learner, adv_rng);
    double yhat = learner->predict(t, T, d.x, history, oracle, learner_rng);
    double loss = linear_loss(yhat, d.y);
    trace.rounds.push_back({d.x.approx(), d.y, yhat, loss});
    trace.cumulative_loss += loss;
    history.add(d.x, d.y);
    learner->end_round();
  }
  std::int64_t per_round_calls = oracle.calls();
  std::vector<ProfileEntry> profile;
  history.profile(profile);
  ErmResult best = oracle(profile);
  trace.best_loss = best.value;
  trace.best_theta = best.theta.approx();
  trace.regret = trace.cumulative_loss - trace.best_loss;
  trace.oracle_calls = oracle.calls();
  trace.calls_per_round = static_cast<double>(per_round_calls) / static_cast<double>(T);
  return trace;
}

CouplingReport coupling_demo(const DiscreteDist& p, const DiscreteDist& mu, const Generator& g,
                             double eps, double delta, std::int64_t T) {
  double D = divergence(g, p, mu);
  require(std::isfinite(D), "coupling_demo needs a finite divergence");
  CouplingReport r{};
  r.divergence = D;
  r.sigma = D > 1.0 ? 1.0 / D : 1.0;
  r.coupling_n = coupling_n(g, r.sigma, eps, delta, T);
  SamplerPlan plan = make_plan(g, D, eps);
  r.M = plan.M;
  r.plan_n = plan.n;
  if (!std::isfinite(r.coupling_n)) {
    throw UnboundedTruncation("coupling sample count is infinite for " + g.name());
  }
  r.n_used = std::max(plan.n, static_cast<std::int64_t>(r.coupling_n));
  OutputLaw law = exact_output_law(p, mu, plan.M, r.n_used);
  r.tv = law.tv_to_target;
  r.ok = r.tv <= eps;
  return r;
}

}  // namespace fdv
