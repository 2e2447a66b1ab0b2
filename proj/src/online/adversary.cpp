#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"
#include "fdiv/online/game.hpp"

namespace fdv {

DiscreteDist ContextLaw::to_dist(const ContextGrid& grid) const {
  std::vector<std::string> labels = grid.base().labels();
  std::vector<double> masses(grid_mass.data(), grid_mass.data() + grid_mass.size());
  if (atom) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "atom:%.17g", atom->approx());
    labels.emplace_back(buf);
    masses.push_back(atom_mass);
  }
  return DiscreteDist(std::move(labels), std::move(masses));
}

double law_divergence(const Generator& g, const ContextLaw& law, const ContextGrid& grid) {
  return divergence_aligned(g, law.grid_mass, grid.mu(), law.atom ? law.atom_mass : 0.0);
}

bool smoothness_check(const Generator& g, const ContextLaw& law, const ContextGrid& grid,
                      double sigma) {
  return law_divergence(g, law, grid) <= 1.0 / sigma * (1.0 + 1e-12);
}

double atom_mixture_delta(const AdversarySpec& spec) {
  if (spec.delta) return *spec.delta;
  double slope = spec.generator.fprime_at_infinity();
  return std::min(1.0, 1.0 / (spec.sigma * slope));
}

namespace {

// Bump on a window of grid cells around `center`, mixed into mu with the
// largest weight that keeps D_f(p || mu) <= 1/sigma.
ContextLaw bump_law(const AdversarySpec& spec, const ContextGrid& grid, std::size_t center) {
  const auto G = static_cast<std::int64_t>(grid.size());
  auto half = static_cast<std::int64_t>(std::ceil(spec.window * static_cast<double>(G) / 2.0));
  std::int64_t lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(center) - half);
  std::int64_t hi = std::min<std::int64_t>(G - 1, static_cast<std::int64_t>(center) + half);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(G);
  double support = grid.mu().segment(lo, hi - lo + 1).sum();
  if (support <= 0.0) throw SmoothnessError("bump window has no base mass");
  q.segment(lo, hi - lo + 1) = grid.mu().segment(lo, hi - lo + 1) / support;

  auto mix = [&](double a) {
    ContextLaw law;
    law.grid_mass = (1.0 - a) * grid.mu() + a * q;
    return law;
  };
  const double budget = 1.0 / spec.sigma;
  double a = 1.0;
  if (law_divergence(spec.generator, mix(1.0), grid) > budget) {
    double ok = 0.0, bad = 1.0;
    for (int it = 0; it < 100; ++it) {
      double midp = 0.5 * (ok + bad);
      (law_divergence(spec.generator, mix(midp), grid) <= budget ? ok : bad) = midp;
    }
    a = ok;
  }
  ContextLaw law = mix(a);
  if (!smoothness_check(spec.generator, law, grid, spec.sigma)) {
    throw SmoothnessError("bump law fails the smoothness check");
  }
  return law;
}

double noisy_label(bool above, double noise, Rng& rng) {
  double y = above ? 1.0 : -1.0;
  return uniform01(rng) < noise ? -y : y;
}

class SmoothAdversary : public Adversary {
 public:
  SmoothAdversary(const AdversarySpec& spec, const ContextGrid& grid, std::uint64_t seed)
      : spec_(spec), grid_(&grid) {
    require(spec.noise >= 0.0 && spec.noise <= 0.5, "label noise must lie in [0, 1/2]");
    require(spec.window > 0.0 && spec.window <= 1.0, "bump window must lie in (0, 1]");
    int K = spec.kind == AdversaryKind::adaptive_greedy ? spec.K : 1;
    require(K >= 1, "adaptive_greedy needs K >= 1");
    Rng setup = make_rng(seed, "adversary/setup");
    const std::size_t G = grid.size();
    theta_index_ = static_cast<std::size_t>(uniform01(setup) * static_cast<double>(G));
    theta_ = grid.point(theta_index_);
    for (int k = 0; k < K; ++k) {
      std::size_t center = k == 0 ? theta_index_
                                  : static_cast<std::size_t>(
                                        std::llround(static_cast<double>(k) *
                                                     static_cast<double>(G - 1) / K));
      laws_.push_back(bump_law(spec, grid, center));
      samplers_.emplace_back(laws_.back().grid_mass);
    }
  }

  AdversaryDraw step(std::int64_t, const Learner& learner, Rng& rng) override {
    std::size_t pick = 0;
    if (laws_.size() > 1) {
      double best = -1.0;
      for (std::size_t k = 0; k < laws_.size(); ++k) {
        double risk = expected_loss(laws_[k], learner);
        if (risk > best) {
          best = risk;
          pick = k;
        }
      }
    }
    last_ = pick;
    std::size_t i = samplers_[pick](rng);
    AdversaryDraw d{grid_context(*grid_, i), 0.0};
    d.y = noisy_label(i >= theta_index_, spec_.noise, rng);
    return d;
  }

  const ContextLaw& last_law() const override { return laws_[last_]; }

 private:
  double expected_loss(const ContextLaw& law, const Learner& learner) const {
    double risk = 0.0;
    const double margin = 1.0 - 2.0 * spec_.noise;
    for (std::size_t i = 0; i < grid_->size(); ++i) {
      double w = law.grid_mass[static_cast<Eigen::Index>(i)];
      if (w <= 0.0) continue;
      double y = i >= theta_index_ ? 1.0 : -1.0;
      risk += w * 0.5 * (1.0 - learner.probe(grid_context(*grid_, i)) * y * margin);
    }
    return risk;
  }

  AdversarySpec spec_;
  const ContextGrid* grid_;
  std::size_t theta_index_ = 0;
  Dyadic theta_;
  std::vector<ContextLaw> laws_;
  std::vector<Categorical> samplers_;
  std::size_t last_ = 0;
};

/*
 * p_t = (1 - delta) mu + delta atom(xbar_t), where
 *   xbar_t = 1/2 + sum_{s<t} eps_s 2^{-s-1} = 0.b_1 ... b_{t-1} 1   (binary)
 * with b_s = 1 iff eps_s = +1, and theta* = 0.b_1 b_2 ... . The bits are
 * drawn lazily in order, so a label never needs more than the bits already
 * committed plus the ones it forces. The atom sits at the exact dyadic
 * point, not on the grid.
 */
class AtomMixtureAdversary : public Adversary {
 public:
  AtomMixtureAdversary(const AdversarySpec& spec, const ContextGrid& grid, std::uint64_t seed)
      : spec_(spec), grid_(&grid), bit_rng_(make_rng(seed, "adversary/theta_bits")) {
    delta_ = atom_mixture_delta(spec);
    require(delta_ >= 0.0 && delta_ <= 1.0, "atom_mixture delta must lie in [0,1]");
    law_.grid_mass = (1.0 - delta_) * grid.mu();
    law_.atom_mass = delta_;
  }

  AdversaryDraw step(std::int64_t t, const Learner&, Rng& rng) override {
    std::vector<bool> prefix(static_cast<std::size_t>(t));
    for (std::int64_t s = 1; s < t; ++s) prefix[static_cast<std::size_t>(s - 1)] = bit(s);
    prefix.back() = true;
    law_.atom = Dyadic::from_bits(prefix);
    if (!smoothness_check(spec_.generator, law_, *grid_, spec_.sigma)) {
      throw SmoothnessError("atom mixture law fails the smoothness check");
    }
    AdversaryDraw d;
    if (uniform01(rng) < delta_) {
      d.x = Context{-1, *law_.atom};
    } else {
      d.x = grid_context(*grid_, grid_->sampler()(rng));
    }
    d.y = label(d.x.value);
    return d;
  }

  const ContextLaw& last_law() const override { return law_; }
  double delta() const { return delta_; }

 private:
  bool bit(std::int64_t s) {
    while (static_cast<std::int64_t>(bits_.size()) < s) bits_.push_back(bit_rng_() >> 63);
    return bits_[static_cast<std::size_t>(s - 1)];
  }

  // +1 iff x >= theta*; theta* differs from every dyadic almost surely.
  double label(const Dyadic& x) {
    if (x.bit(0)) return 1.0;
    const std::size_t len = x.length();
    for (std::size_t i = 1;; ++i) {
      if (i > len) return -1.0;
      bool xb = x.bit(i);
      bool tb = bit(static_cast<std::int64_t>(i));
      if (xb != tb) return tb ? -1.0 : 1.0;
    }
  }

  AdversarySpec spec_;
  const ContextGrid* grid_;
  Rng bit_rng_;
  std::vector<bool> bits_;
  double delta_ = 1.0;
  ContextLaw law_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, const ContextGrid& grid,
                                          std::uint64_t seed) {
  require(spec.sigma > 0.0 && spec.sigma <= 1.0, "adversary needs sigma in (0,1]");
  if (spec.kind == AdversaryKind::atom_mixture) {
    return std::make_unique<AtomMixtureAdversary>(spec, grid, seed);
  }
  return std::make_unique<SmoothAdversary>(spec, grid, seed);
}

}  // namespace fdv
