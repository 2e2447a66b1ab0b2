#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fdiv/discrete_dist.hpp"
#include "fdiv/generator.hpp"
#include "fdiv/online/dyadic.hpp"
#include "fdiv/online/threshold.hpp"
#include "fdiv/rng.hpp"

namespace fdv {

// Base measure mu on a finite grid of contexts in [0,1], sorted by value.
class ContextGrid {
 public:
  // Uniform mu on k/(points-1).
  explicit ContextGrid(std::size_t points);
  // Labels must parse as numbers in [0,1].
  explicit ContextGrid(const DiscreteDist& mu);

  std::size_t size() const { return values_.size(); }
  double value(std::size_t k) const { return values_[k]; }
  const Dyadic& point(std::size_t k) const { return points_[k]; }
  const DiscreteDist& base() const { return base_; }
  const Eigen::VectorXd& mu() const { return base_.masses(); }
  const Categorical& sampler() const { return sampler_; }
  // Grid thresholds plus 1+, with data breakpoints: every threshold on [0,1].
  const ThresholdClass& learner_class() const { return cls_; }
  std::size_t index_of_value(double x) const;

 private:
  void finish();
  std::vector<double> values_;
  std::vector<Dyadic> points_;
  DiscreteDist base_;
  Categorical sampler_;
  ThresholdClass cls_;
};

struct Context {
  std::int64_t grid_index = -1;  // -1 for a point off the grid
  Dyadic value;
  double approx() const { return value.approx(); }
};

Context grid_context(const ContextGrid& grid, std::size_t k);

// Unit-weight examples seen so far, aggregated per context.
class History {
 public:
  explicit History(const ContextGrid& grid);
  void add(const Context& x, double y, double w = 1.0);
  std::size_t size() const { return count_; }

  // Sorted merge of the history with optional per-grid extra costs and one
  // optional extra example.
  void profile(std::vector<ProfileEntry>& out, const std::vector<Cost>* extra_grid = nullptr,
               const Context* x = nullptr, Cost x_cost = {}) const;

 private:
  const ContextGrid* grid_;
  std::vector<Cost> grid_costs_;
  std::map<Dyadic, Cost> offgrid_;
  std::size_t count_ = 0;
};

// ---------------------------------------------------------------- learners

class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  virtual bool proper() const = 0;
  // Runs before the context of round t exists; proper learners commit here.
  virtual void begin_round(std::int64_t /*t*/, std::int64_t /*T*/, const History&, ErmOracle&,
                           Rng&) {}
  virtual double predict(std::int64_t t, std::int64_t T, const Context& x, const History& h,
                         ErmOracle& oracle, Rng& rng) = 0;
  virtual void end_round() {}
  // Prediction at x from the state left by the previous round; no oracle
  // calls and no randomness. Used by adaptive adversaries.
  virtual double probe(const Context& x) const = 0;
};

/*
 * Follow the perturbed leader. The perturbation
 *   eta omega(g) = (eta/sqrt(m)) sum_i gamma_i g(Z_i),  gamma_i ~ N(0,1), Z_i ~ mu
 * is linear in g, and g(Z) = 1 - 2 loss(g(Z), +1), so it enters the ERM call
 * as synthetic examples (Z_i, +1, -2 eta gamma_i / sqrt(m)). eta = 0 is FTL.
 *
 * When m is at least the grid size the draws are aggregated per cell: the
 * cell counts are multinomial and the summed Gaussian of a cell with c draws
 * is sqrt(c) N(0,1), which has the same law as drawing them one by one.
 */
class FtplLearner : public Learner {
 public:
  FtplLearner(const ContextGrid& grid, double eta, std::int64_t m, std::string name = "ftpl");
  std::string name() const override { return name_; }
  bool proper() const override { return true; }
  void begin_round(std::int64_t t, std::int64_t T, const History& h, ErmOracle& oracle,
                   Rng& rng) override;
  double predict(std::int64_t t, std::int64_t T, const Context& x, const History& h,
                 ErmOracle& oracle, Rng& rng) override;
  void end_round() override { probe_theta_ = theta_; }
  double probe(const Context& x) const override {
    return threshold_predict(probe_theta_, x.value);
  }
  const Dyadic& committed() const { return theta_; }

  // One FTPL draw: fills `extra` with the synthetic per-cell costs.
  void draw_perturbation(std::vector<Cost>& extra, Rng& rng) const;

 private:
  const ContextGrid* grid_;
  double eta_;
  std::int64_t m_;
  std::string name_;
  Dyadic theta_, probe_theta_;
  std::vector<Cost> extra_;
  std::vector<ProfileEntry> profile_;
};

/*
 * Relaxation learner with a random playout. For round t it draws Rademacher
 * signs eps_{s,j} and Z_{s,j} ~ mu for s in (t, T], j < n and sets
 *
 *   Phi(y) = sup_g [ c sum eps g(Z) - L_{t-1}(g) - loss(g(x_t), y) ]
 *          = c sum eps - V(y),
 *   V(y)   = min_g [ L_{t-1}(g) + loss(g(x_t), y) + sum 2 c eps loss(g(Z), +1) ],
 *
 * which is two ERM calls. The prediction minimises
 * max_y { loss(yhat, y) + Phi(y) }; with linear loss the two branches are
 * (1 - yhat)/2 + Phi(+1) and (1 + yhat)/2 + Phi(-1), equal at
 * yhat = Phi(+1) - Phi(-1) = V(-1) - V(+1), clipped to [-1, 1].
 */
class RelaxationLearner : public Learner {
 public:
  RelaxationLearner(const ContextGrid& grid, std::int64_t playout_n, double c);
  std::string name() const override { return "relaxation"; }
  bool proper() const override { return false; }
  double predict(std::int64_t t, std::int64_t T, const Context& x, const History& h,
                 ErmOracle& oracle, Rng& rng) override;
  void end_round() override {
    probe_plus_ = last_plus_;
    probe_minus_ = last_minus_;
  }
  double probe(const Context& x) const override {
    return 0.5 * (threshold_predict(probe_plus_, x.value) +
                  threshold_predict(probe_minus_, x.value));
  }

  // Playout costs for `draws` samples, aggregated per cell.
  void draw_playout(std::int64_t draws, std::vector<Cost>& extra, Rng& rng) const;
  // Prediction for a given playout (exposed for the equalisation check).
  double predict_with_playout(const Context& x, const History& h,
                              const std::vector<Cost>& playout, ErmOracle& oracle,
                              double* v_plus = nullptr, double* v_minus = nullptr);

 private:
  const ContextGrid* grid_;
  std::int64_t n_;
  double c_;
  Dyadic last_plus_, last_minus_, probe_plus_, probe_minus_;
  std::vector<Cost> extra_;
  std::vector<ProfileEntry> profile_;
};

enum class LearnerKind { ftpl, relaxation, ftl };

struct LearnerSpec {
  LearnerKind kind = LearnerKind::ftpl;
  double eta = -1.0;           // negative: sqrt(m)
  std::int64_t m = 64;
  bool preset = false;         // FTPL schedule from ftpl_preset
  std::int64_t playout_n = 1;
  double c = 2.0;
};

struct FtplParams {
  std::int64_t m;
  double eta;
  double eps;
};

// k = eps^{-2/3}, m = k log T (eps sigma)^{-1/(l-1)}, eta = sqrt(m),
// eps = T^{-(6l-6)/(4l-1)} sigma^{-3/(4l-1)}.
FtplParams ftpl_preset(double lambda, double sigma, std::int64_t T);

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec, const ContextGrid& grid,
                                      const Generator& g, double sigma, std::int64_t T);

// -------------------------------------------------------------- adversaries

// Per-round context law: grid masses plus an optional atom off the grid.
struct ContextLaw {
  Eigen::VectorXd grid_mass;
  std::optional<Dyadic> atom;
  double atom_mass = 0.0;
  DiscreteDist to_dist(const ContextGrid& grid) const;
};

double law_divergence(const Generator& g, const ContextLaw& law, const ContextGrid& grid);
bool smoothness_check(const Generator& g, const ContextLaw& law, const ContextGrid& grid,
                      double sigma);

enum class AdversaryKind { smooth_iid, atom_mixture, adaptive_greedy };

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::smooth_iid;
  Generator generator = Generator::renyi(2.0);
  double sigma = 0.1;
  double noise = 0.1;                 // label flip rate (smooth_iid, adaptive_greedy)
  double window = 0.125;              // bump width as a fraction of the grid
  std::optional<double> delta;        // atom_mixture weight; default min(1, 1/(sigma f'(inf)))
  int K = 4;                          // adaptive_greedy pool size
};

double atom_mixture_delta(const AdversarySpec& spec);

struct AdversaryDraw {
  Context x;
  double y = 1.0;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual AdversaryDraw step(std::int64_t t, const Learner& learner, Rng& rng) = 0;
  virtual const ContextLaw& last_law() const = 0;
};

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, const ContextGrid& grid,
                                          std::uint64_t seed);

// ------------------------------------------------------------------- game

struct RoundRecord {
  double x;
  double y;
  double prediction;
  double loss;
};

struct RegretTrace {
  std::vector<RoundRecord> rounds;
  double cumulative_loss = 0.0;
  double best_loss = 0.0;
  double best_theta = 0.0;
  double regret = 0.0;
  std::uint64_t seed = 0;
  std::int64_t oracle_calls = 0;
  double calls_per_round = 0.0;  // excludes the final best-in-hindsight call
  std::string learner;
};

RegretTrace run_game(std::int64_t T, const AdversarySpec& adversary, const LearnerSpec& learner,
                     const ContextGrid& grid, std::uint64_t seed);

// ---------------------------------------------------------------- coupling

struct CouplingReport {
  double divergence;
  double sigma;          // min(1, 1/divergence)
  double coupling_n;
  double M;
  std::int64_t plan_n;
  std::int64_t n_used;   // max(coupling_n, plan_n)
  double tv;
  bool ok;               // tv <= eps
};

CouplingReport coupling_demo(const DiscreteDist& p, const DiscreteDist& mu, const Generator& g,
                             double eps, double delta, std::int64_t T);

}  // namespace fdv
