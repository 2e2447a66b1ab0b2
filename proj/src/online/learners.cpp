#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "fdiv/errors.hpp"
#include "fdiv/online/game.hpp"

namespace fdv {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ContextGrid::ContextGrid(std::size_t points)
    : base_(DiscreteDist::point("0")), cls_(ThresholdClass::uniform(2)) {
  if (points < 2) throw PreconditionError("context grid needs at least 2 points");
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < points; ++k) {
    values_.push_back(static_cast<double>(k) / static_cast<double>(points - 1));
    labels.push_back(format_value(values_.back()));
  }
  base_ = DiscreteDist::uniform(std::move(labels));
  finish();
}

ContextGrid::ContextGrid(const DiscreteDist& mu)
    : base_(DiscreteDist::point("0")), cls_(ThresholdClass::uniform(2)) {
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const std::string& s = mu.label(i);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !(v >= 0.0 && v <= 1.0)) {
      throw DataError("context label '" + s + "' is not a number in [0,1]");
    }
    order.emplace_back(v, i);
  }
  std::sort(order.begin(), order.end());
  std::vector<std::string> labels;
  std::vector<double> masses;
  for (auto [v, i] : order) {
    if (!values_.empty() && values_.back() == v) throw DataError("duplicate context value");
    values_.push_back(v);
    labels.push_back(mu.label(i));
    masses.push_back(mu.mass(i));
  }
  base_ = DiscreteDist(std::move(labels), std::move(masses));
  finish();
}

void ContextGrid::finish() {
  points_.reserve(values_.size());
  for (double v : values_) points_.push_back(Dyadic::from_double(v));
  sampler_ = Categorical(base_.masses());
  std::vector<double> th = values_;
  th.push_back(ThresholdClass::kAboveOne);
  cls_ = ThresholdClass(std::move(th), true);
}

std::size_t ContextGrid::index_of_value(double x) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  if (it == values_.end() || *it != x) throw DataError("value is not a grid context");
  return static_cast<std::size_t>(it - values_.begin());
}

Context grid_context(const ContextGrid& grid, std::size_t k) {
  return {static_cast<std::int64_t>(k), grid.point(k)};
}

History::History(const ContextGrid& grid) : grid_(&grid), grid_costs_(grid.size()) {}

void History::add(const Context& x, double y, double w) {
  if (x.grid_index >= 0) {
    grid_costs_[static_cast<std::size_t>(x.grid_index)].add(y, w);
  } else {
    offgrid_[x.value].add(y, w);
  }
  ++count_;
}

void History::profile(std::vector<ProfileEntry>& out, const std::vector<Cost>* extra_grid,
                      const Context* x, Cost x_cost) const {
  out.clear();
  auto off = offgrid_.begin();
  bool x_pending = x != nullptr;
  auto push_x_before = [&](const Dyadic& next) {
    if (x_pending && x->value < next) {
      out.push_back({&x->value, x_cost});
      x_pending = false;
    }
  };
  for (std::size_t k = 0; k < grid_costs_.size(); ++k) {
    const Dyadic& p = grid_->point(k);
    while (off != offgrid_.end() && off->first < p) {
      push_x_before(off->first);
      out.push_back({&off->first, off->second});
      ++off;
    }
    push_x_before(p);
    Cost c = grid_costs_[k];
    if (extra_grid) {
      c.plus += (*extra_grid)[k].plus;
      c.minus += (*extra_grid)[k].minus;
    }
    if (!c.zero()) out.push_back({&p, c});
  }
  for (; off != offgrid_.end(); ++off) {
    push_x_before(off->first);
    out.push_back({&off->first, off->second});
  }
  if (x_pending) out.push_back({&x->value, x_cost});
}

// ------------------------------------------------------------------- FTPL

FtplLearner::FtplLearner(const ContextGrid& grid, double eta, std::int64_t m, std::string name)
    : grid_(&grid), eta_(eta), m_(m), name_(std::move(name)), extra_(grid.size()) {
  require(eta >= 0.0, "ftpl needs eta >= 0");
  require(m >= 1, "ftpl needs m >= 1");
  theta_ = grid.point(0);
  probe_theta_ = theta_;
}

void FtplLearner::draw_perturbation(std::vector<Cost>& extra, Rng& rng) const {
  extra.assign(grid_->size(), Cost{});
  if (eta_ == 0.0) return;
  const double scale = -2.0 * eta_ / std::sqrt(static_cast<double>(m_));
  std::normal_distribution<double> normal(0.0, 1.0);
  if (m_ < static_cast<std::int64_t>(grid_->size())) {
    for (std::int64_t i = 0; i < m_; ++i) {
      std::size_t z = grid_->sampler()(rng);
      extra[z].minus += scale * normal(rng);
    }
    return;
  }
  auto counts = grid_->sampler().counts(m_, rng);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    extra[k].minus += scale * std::sqrt(static_cast<double>(counts[k])) * normal(rng);
  }
}

void FtplLearner::begin_round(std::int64_t, std::int64_t, const History& h, ErmOracle& oracle,
                              Rng& rng) {
  draw_perturbation(extra_, rng);
  h.profile(profile_, &extra_);
  theta_ = oracle(profile_).theta;
}

double FtplLearner::predict(std::int64_t, std::int64_t, const Context& x, const History&,
                            ErmOracle&, Rng&) {
  return threshold_predict(theta_, x.value);
}

// ------------------------------------------------------------- relaxation

RelaxationLearner::RelaxationLearner(const ContextGrid& grid, std::int64_t playout_n, double c)
    : grid_(&grid), n_(playout_n), c_(c), extra_(grid.size()) {
  require(playout_n >= 1, "relaxation needs playout width n >= 1");
  require(c > 0.0, "relaxation needs c > 0");
  last_plus_ = last_minus_ = probe_plus_ = probe_minus_ = grid.point(0);
}

void RelaxationLearner::draw_playout(std::int64_t draws, std::vector<Cost>& extra,
                                     Rng& rng) const {
  extra.assign(grid_->size(), Cost{});
  if (draws <= 0) return;
  const double w = 2.0 * c_;
  if (draws < static_cast<std::int64_t>(grid_->size())) {
    for (std::int64_t i = 0; i < draws; ++i) {
      std::size_t z = grid_->sampler()(rng);
      extra[z].minus += w * rademacher(rng);
    }
    return;
  }
  auto counts = grid_->sampler().counts(draws, rng);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    std::binomial_distribution<std::int64_t> half(counts[k], 0.5);
    double signs = static_cast<double>(2 * half(rng) - counts[k]);
    extra[k].minus += w * signs;
  }
}

double RelaxationLearner::predict_with_playout(const Context& x, const History& h,
                                               const std::vector<Cost>& playout,
                                               ErmOracle& oracle, double* v_plus,
                                               double* v_minus) {
  // y = +1: loss(g(x), +1) is paid when g(x) = -1
  h.profile(profile_, &playout, &x, Cost{0.0, 1.0});
  ErmResult plus = oracle(profile_);
  h.profile(profile_, &playout, &x, Cost{1.0, 0.0});
  ErmResult minus = oracle(profile_);
  last_plus_ = plus.theta;
  last_minus_ = minus.theta;
  if (v_plus) *v_plus = plus.value;
  if (v_minus) *v_minus = minus.value;
  return std::clamp(minus.value - plus.value, -1.0, 1.0);
}

double RelaxationLearner::predict(std::int64_t t, std::int64_t T, const Context& x,
                                  const History& h, ErmOracle& oracle, Rng& rng) {
  draw_playout((T - t) * n_, extra_, rng);
  return predict_with_playout(x, h, extra_, oracle);
}

FtplParams ftpl_preset(double lambda, double sigma, std::int64_t T) {
  require(lambda > 1.0, "ftpl preset needs a Renyi order > 1");
  require(sigma > 0.0 && sigma <= 1.0, "ftpl preset needs sigma in (0,1]");
  require(T >= 2, "ftpl preset needs T >= 2");
  const double Td = static_cast<double>(T);
  double eps = std::pow(Td, -(6.0 * lambda - 6.0) / (4.0 * lambda - 1.0)) *
               std::pow(sigma, -3.0 / (4.0 * lambda - 1.0));
  double k = std::pow(eps, -2.0 / 3.0);
  double m = std::ceil(k * std::log(Td) * std::pow(eps * sigma, -1.0 / (lambda - 1.0)));
  auto mi = static_cast<std::int64_t>(std::max(1.0, m));
  return {mi, std::sqrt(static_cast<double>(mi)), eps};
}

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec, const ContextGrid& grid,
                                      const Generator& g, double sigma, std::int64_t T) {
  switch (spec.kind) {
    case LearnerKind::ftl:
      return std::make_unique<FtplLearner>(grid, 0.0, 1, "ftl");
    case LearnerKind::relaxation:
      return std::make_unique<RelaxationLearner>(grid, spec.playout_n, spec.c);
    case LearnerKind::ftpl: {
      if (spec.preset) {
        if (g.kind() != GeneratorKind::Renyi) {
          throw PreconditionError("the ftpl preset needs a Renyi generator");
        }
        FtplParams p = ftpl_preset(g.param(), sigma, T);
        return std::make_unique<FtplLearner>(grid, p.eta, p.m);
      }
      double eta = spec.eta < 0.0 ? std::sqrt(static_cast<double>(spec.m)) : spec.eta;
      return std::make_unique<FtplLearner>(grid, eta, spec.m);
    }
  }
  throw PreconditionError("unknown learner");
}

}  // namespace fdv
