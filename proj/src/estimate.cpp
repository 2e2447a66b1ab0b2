#include "fdiv/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fdiv/complexity.hpp"
#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"
#include "fdiv/parallel.hpp"

namespace fdv {

namespace {

double parse_point(const std::string& label) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(label, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != label.size()) {
    throw DataError("estimation labels must be numbers, got '" + label + "'");
  }
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("estimation label outside [0,1]: " + label);
  return v;
}

std::vector<double> thresholds_for(const std::vector<double>& x) {
  std::vector<double> t = x;
  t.push_back(ThresholdClass::kAboveOne);
  return t;
}

// est(theta_k) = sum_{j >= k} w_j - sum_{j < k} w_j for thresholds placed
// at the sorted atoms, then -sum w for 1+.
std::vector<double> signed_suffix(const Eigen::VectorXd& w) {
  const auto k = static_cast<std::size_t>(w.size());
  std::vector<double> out(k + 1);
  double total = w.sum();
  double below = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = total - 2.0 * below;
    below += w[static_cast<Eigen::Index>(j)];
  }
  out[k] = -total;
  return out;
}

double kl_of(const Eigen::VectorXd& nu, const Eigen::VectorXd& mu) {
  double kl = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (nu[i] == 0.0) continue;
    if (mu[i] == 0.0) return kInf;
    kl += nu[i] * std::log(nu[i] / mu[i]);
  }
  return std::max(kl, 0.0);
}

double chi2_of(const Eigen::VectorXd& nu, const Eigen::VectorXd& mu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (nu[i] == 0.0) continue;
    if (mu[i] == 0.0) return kInf;
    s += nu[i] * nu[i] / mu[i];
  }
  return std::max(s - 1.0, 0.0);
}

}  // namespace

EstimationTask::EstimationTask(const DiscreteDist& mu, const DiscreteDist& nu,
                               const Generator& g, std::int64_t n, std::int64_t m, double eps)
    : cls_({ThresholdClass::kAboveOne}), g_(g), n_(n), m_(m), eps_(eps) {
  require(n >= 1 && m >= 1, "estimation needs n >= 1 and m >= 1");
  require(n % m == 0, "block size m must divide n");
  require(eps > 0.0 && eps < 1.0, "estimation needs 0 < eps < 1");

  AlignedPair a = align(nu, mu);
  std::vector<std::size_t> order(a.labels.size());
  std::vector<double> value(a.labels.size());
  for (std::size_t i = 0; i < a.labels.size(); ++i) value[i] = parse_point(a.labels[i]);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return value[l] < value[r]; });

  const auto k = static_cast<Eigen::Index>(order.size());
  mu_.resize(k);
  nu_.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    std::size_t i = order[static_cast<std::size_t>(j)];
    if (j > 0 && value[i] == x_.back()) {
      throw DataError("labels '" + labels_.back() + "' and '" + a.labels[i] +
                      "' denote the same point");
    }
    x_.push_back(value[i]);
    labels_.push_back(a.labels[i]);
    mu_[j] = a.mu[static_cast<Eigen::Index>(i)];
    nu_[j] = a.nu[static_cast<Eigen::Index>(i)];
  }
  ratio_.resize(x_.size());
  for (Eigen::Index j = 0; j < k; ++j) {
    if (mu_[j] > 0.0) {
      ratio_[static_cast<std::size_t>(j)] = nu_[j] / mu_[j];
    } else {
      ratio_[static_cast<std::size_t>(j)] = nu_[j] > 0.0 ? kInf : 0.0;
      singular_ += nu_[j];
    }
  }
  sampler_ = Categorical(mu_);
  cls_ = ThresholdClass(thresholds_for(x_));
  divergence_ = divergence_aligned(g_, nu_, mu_);
}

void EstimationTask::set_M(double M) {
  require(M > 0.0, "truncation level M must be positive");
  M_override_ = M;
}

SamplerPlan EstimationTask::plan() const {
  if (M_override_) return {*M_override_, m_, Fallback::uniform_index};
  if (!std::isfinite(divergence_)) {
    throw UnboundedTruncation("rejection estimator needs a finite divergence");
  }
  SamplerPlan p = make_plan(g_, divergence_, eps_);
  p.n = m_;
  return p;
}

bool EstimationTask::budget_warning() const {
  if (M_override_ || !std::isfinite(divergence_)) return false;
  try {
    return make_plan(g_, divergence_, eps_).n > m_;
  } catch (const Error&) {
    return true;
  }
}

Eigen::VectorXd EstimationTask::tabulate(
    const std::function<double(const std::string&)>& h) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(labels_.size()));
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    double hv = h(labels_[j]);
    if (!(hv >= -1.0 && hv <= 1.0)) throw DomainError("h must take values in [-1,1]");
    v[static_cast<Eigen::Index>(j)] = hv;
  }
  return v;
}

std::vector<double> EstimationTask::truth() const { return signed_suffix(nu_); }

Eigen::VectorXd importance_weights(const EstimationTask& task, Rng& rng) {
  if (!task.absolutely_continuous()) {
    throw DataError("undefined ratio: nu has mass off supp(mu)");
  }
  auto counts = task.sampler_.counts(task.n(), rng);
  Eigen::VectorXd w(static_cast<Eigen::Index>(counts.size()));
  double inv_n = 1.0 / static_cast<double>(task.n());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    double c = static_cast<double>(counts[j]);
    w[static_cast<Eigen::Index>(j)] = c > 0.0 ? c * task.ratio_[j] * inv_n : 0.0;
  }
  return w;
}

Eigen::VectorXd rejection_weights(const EstimationTask& task, Rng& rng) {
  SamplerPlan plan = task.plan();
  std::int64_t blocks = task.n() / task.m();
  double share = 1.0 / static_cast<double>(blocks);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(task.atoms()));
  for (std::int64_t b = 0; b < blocks; ++b) {
    std::size_t idx = rejection_select_index(task.sampler_, task.ratio_, plan, rng);
    w[static_cast<Eigen::Index>(idx)] += share;
  }
  return w;
}

double importance_estimate(const EstimationTask& task,
                           const std::function<double(const std::string&)>& h, Rng& rng) {
  Eigen::VectorXd hv = task.tabulate(h);
  return importance_weights(task, rng).dot(hv);
}

double rejection_estimate(const EstimationTask& task,
                          const std::function<double(const std::string&)>& h, Rng& rng) {
  Eigen::VectorXd hv = task.tabulate(h);
  return rejection_weights(task, rng).dot(hv);
}

std::vector<double> threshold_estimates(const EstimationTask& task,
                                        const Eigen::VectorXd& weights) {
  require(static_cast<std::size_t>(weights.size()) == task.atoms(),
          "weight vector does not match the task atoms");
  return signed_suffix(weights);
}

double uniform_error(const EstimationTask& task, const std::vector<double>& estimates) {
  std::vector<double> truth = task.truth();
  require(estimates.size() == truth.size(), "need one estimate per threshold of the class");
  double worst = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    worst = std::max(worst, std::abs(estimates[k] - truth[k]));
  }
  return worst;
}

double default_bracketing(double alpha) { return std::ceil(2.0 / (alpha * alpha)); }

double bracketing_integral(const std::function<double(double)>& entropy) {
  auto integrand = [&](double alpha) {
    double n = entropy(alpha);
    return n > 1.0 ? std::sqrt(std::log(n)) : 0.0;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  return GK::integrate(integrand, 0.0, 2.0, 20, 1e-10);
}

BoundCurves bound_curves(const EstimationTask& task, const std::function<double(double)>& entropy,
                         const std::vector<std::int64_t>& n_grid) {
  BoundCurves out;
  out.chi2 = chi2_of(task.nu(), task.mu());
  out.kl = kl_of(task.nu(), task.mu());
  out.kl_marker = std::exp(out.kl);
  out.integral = bracketing_integral(entropy);
  double s = std::sqrt(1.0 + out.chi2);
  for (std::int64_t n : n_grid) {
    require(n >= 1, "bound curves need n >= 1");
    double nd = static_cast<double>(n);
    BoundPoint p;
    p.n = n;
    p.importance = s * std::max(std::cbrt(1.0 / nd), s / std::sqrt(nd) * out.integral);
    p.rejection = out.integral * std::sqrt(static_cast<double>(task.m()) / nd) + 2.0 * task.eps();
    out.points.push_back(p);
  }
  return out;
}

ErrorSummary summarize(const std::vector<double>& values) {
  require(!values.empty(), "cannot summarise an empty sample");
  double n = static_cast<double>(values.size());
  double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::vector<std::int64_t> knee_grid(double kl) {
  require(std::isfinite(kl) && kl >= 0.0, "knee grid needs a finite KL");
  double lo = std::exp(kl) / 10.0;
  std::vector<std::int64_t> out;
  for (int k = 0; k < 9; ++k) {
    double v = lo * std::pow(100.0, static_cast<double>(k) / 8.0);
    auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(v - 1e-9)));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

KneeResult kl_threshold_experiment(const DiscreteDist& mu, const DiscreteDist& nu,
                                   const std::vector<std::int64_t>& n_grid, int replicates,
                                   std::uint64_t seed) {
  require(replicates >= 1, "need at least one replicate");
  AlignedPair a = align(nu, mu);
  KneeResult out;
  out.kl = kl_of(a.nu, a.mu);
  if (!std::isfinite(out.kl)) throw DataError("undefined ratio: nu has mass off supp(mu)");
  out.marker = std::exp(out.kl);

  Eigen::Index top = 0;
  a.nu.maxCoeff(&top);
  double target = a.nu[top];
  const auto k = a.nu.size();
  std::vector<double> weight(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (a.mu[i] > 0.0) weight[static_cast<std::size_t>(i)] = (i == top ? a.nu[i] / a.mu[i] : 0.0);
  }
  Categorical sampler(a.mu);

  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    std::int64_t n = n_grid[g];
    require(n >= 1, "sample sizes must be positive");
    std::vector<double> err(static_cast<std::size_t>(replicates));
    std::uint64_t base = child_seed(seed, "estimate/kl_knee", g);
    parallel_for(err.size(), [&](std::size_t r) {
      Rng rng = make_rng(base, "replicate", r);
      auto counts = sampler.counts(n, rng);
      double est = 0.0;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) est += static_cast<double>(counts[i]) * weight[i];
      }
      err[r] = std::abs(est / static_cast<double>(n) - target);
    });
    ErrorSummary s = summarize(err);
    out.rows.push_back({n, s.mean, s.std_err});
  }
  return out;
}

std::vector<CompareRow> compare_estimators(const DiscreteDist& mu, const DiscreteDist& nu,
                                           const Generator& g,
                                           const std::vector<std::int64_t>& n_grid,
                                           int replicates, std::uint64_t seed, double eps,
                                           std::int64_t m) {
  require(replicates >= 1, "need at least one replicate");
  std::vector<CompareRow> rows;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    std::int64_t n = n_grid[gi];
    require(n >= 1, "sample sizes must be positive");
    double e = eps > 0.0 ? eps : std::cbrt(1.0 / static_cast<double>(n));
    if (!(e < 1.0)) e = 0.5;

    std::int64_t block = m;
    if (block <= 0) {
      EstimationTask probe(mu, nu, g, 1, 1, e);
      if (!std::isfinite(probe.divergence())) {
        throw UnboundedTruncation("rejection estimator needs a finite divergence");
      }
      block = make_plan(g, probe.divergence(), e).n;
    }
    block = std::clamp<std::int64_t>(block, 1, n);
    std::int64_t n_used = n / block * block;
    EstimationTask task(mu, nu, g, n_used, block, e);
    BoundCurves curve = bound_curves(task, default_bracketing, {n_used});

    std::vector<double> imp(static_cast<std::size_t>(replicates));
    std::vector<double> rej(static_cast<std::size_t>(replicates));
    std::uint64_t imp_base = child_seed(seed, "estimate/importance", gi);
    std::uint64_t rej_base = child_seed(seed, "estimate/rejection", gi);
    parallel_for(imp.size(), [&](std::size_t r) {
      Rng ri = make_rng(imp_base, "replicate", r);
      imp[r] = uniform_error(task, threshold_estimates(task, importance_weights(task, ri)));
      Rng rr = make_rng(rej_base, "replicate", r);
      rej[r] = uniform_error(task, threshold_estimates(task, rejection_weights(task, rr)));
    });
    ErrorSummary si = summarize(imp);
    ErrorSummary sr = summarize(rej);
    rows.push_back({"importance", n_used, 1, e, si.mean, si.std_err, curve.points[0].importance});
    rows.push_back({"rejection", n_used, block, e, sr.mean, sr.std_err, curve.points[0].rejection});
  }
  return rows;
}

}  // namespace fdv
