#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fdiv/discrete_dist.hpp"
#include "fdiv/generator.hpp"
#include "fdiv/online/threshold.hpp"
#include "fdiv/rng.hpp"
#include "fdiv/sampler.hpp"

namespace fdv {

/*
 * Mean estimation of E_nu[h] from draws of mu. Both estimators are linear in
 * h, so one batch of draws is summarised as a signed weight per atom and any
 * h is evaluated as weights . h.
 *
 *   I_n     = (1/n) sum_i r(X_i) h(X_i)                      X_i ~ mu
 *   J_{m,n} = (m/n) sum_{blocks} h(X'_b)   X'_b one truncated rejection draw
 *                                          from a block of m draws of mu
 */
class EstimationTask {
 public:
  // Labels of mu and nu must parse as numbers in [0,1].
  EstimationTask(const DiscreteDist& mu, const DiscreteDist& nu, const Generator& g,
                 std::int64_t n, std::int64_t m, double eps);

  std::size_t atoms() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::VectorXd& nu() const { return nu_; }
  const std::vector<double>& ratio() const { return ratio_; }
  const ThresholdClass& threshold_class() const { return cls_; }
  const Generator& generator() const { return g_; }
  std::int64_t n() const { return n_; }
  std::int64_t m() const { return m_; }
  double eps() const { return eps_; }
  double divergence() const { return divergence_; }
  bool absolutely_continuous() const { return singular_ == 0.0; }

  // Rejection plan: M from make_plan(g, D, eps) unless overridden, block
  // size m.
  SamplerPlan plan() const;
  void set_M(double M);
  // True when m is below the make_plan sample budget.
  bool budget_warning() const;

  // h as a vector over atoms from a label function.
  Eigen::VectorXd tabulate(const std::function<double(const std::string&)>& h) const;
  // E_nu[g_theta] for every threshold of the class.
  std::vector<double> truth() const;

 private:
  std::vector<double> x_;
  std::vector<std::string> labels_;
  Eigen::VectorXd mu_, nu_;
  std::vector<double> ratio_;
  double singular_ = 0.0;
  Categorical sampler_;
  ThresholdClass cls_;
  Generator g_;
  std::int64_t n_, m_;
  double eps_;
  double divergence_;
  std::optional<double> M_override_;
  friend Eigen::VectorXd importance_weights(const EstimationTask&, Rng&);
  friend Eigen::VectorXd rejection_weights(const EstimationTask&, Rng&);
};

Eigen::VectorXd importance_weights(const EstimationTask& task, Rng& rng);
Eigen::VectorXd rejection_weights(const EstimationTask& task, Rng& rng);

double importance_estimate(const EstimationTask& task,
                           const std::function<double(const std::string&)>& h, Rng& rng);
double rejection_estimate(const EstimationTask& task,
                          const std::function<double(const std::string&)>& h, Rng& rng);

// Estimates of E[g_theta] for every threshold of the class from per-atom
// weights.
std::vector<double> threshold_estimates(const EstimationTask& task,
                                        const Eigen::VectorXd& weights);
// sup_theta |estimate(theta) - E_nu[g_theta]|
double uniform_error(const EstimationTask& task, const std::vector<double>& estimates);

// int_0^2 sqrt(log N(alpha)) d alpha
double bracketing_integral(const std::function<double(double)>& entropy);
// Default bracketing number for thresholds: ceil(2 / alpha^2).
double default_bracketing(double alpha);

struct BoundPoint {
  std::int64_t n;
  double importance;  // sqrt(1+chi2) max(n^{-1/3}, sqrt((1+chi2)/n) I)
  double rejection;   // I sqrt(m/n) + 2 eps
};

struct BoundCurves {
  double chi2;
  double kl;
  double kl_marker;   // e^{KL}
  double integral;
  std::vector<BoundPoint> points;
};

BoundCurves bound_curves(const EstimationTask& task, const std::function<double(double)>& entropy,
                         const std::vector<std::int64_t>& n_grid);

struct ErrorSummary {
  double mean;
  double std_err;
};

ErrorSummary summarize(const std::vector<double>& values);

struct KneeRow {
  std::int64_t n;
  double mean_err;
  double std_err;
};

struct KneeResult {
  double kl;
  double marker;  // e^{KL}
  std::vector<KneeRow> rows;
};

// 9 log-spaced sizes in [e^{KL}/10, 10 e^{KL}], rounded up, at least 1.
std::vector<std::int64_t> knee_grid(double kl);

// Mean |I_n(h) - E_nu h| over replicates for h = indicator of nu's heaviest
// atom.
KneeResult kl_threshold_experiment(const DiscreteDist& mu, const DiscreteDist& nu,
                                   const std::vector<std::int64_t>& n_grid, int replicates,
                                   std::uint64_t seed);

struct CompareRow {
  std::string estimator;
  std::int64_t n;
  std::int64_t m;
  double eps;
  double mean_err;
  double std_err;
  double bound_value;
};

// Uniform error of both estimators over replicates at each n. eps defaults to
// n^{-1/3}; m defaults to the make_plan budget and n is rounded down to a
// multiple of m.
std::vector<CompareRow> compare_estimators(const DiscreteDist& mu, const DiscreteDist& nu,
                                           const Generator& g,
                                           const std::vector<std::int64_t>& n_grid,
                                           int replicates, std::uint64_t seed,
                                           double eps = -1.0, std::int64_t m = 0);

}  // namespace fdv
