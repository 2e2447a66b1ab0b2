#include "fdiv/online/threshold.hpp"

#include <algorithm>
#include <numeric>

#include "fdiv/errors.hpp"

namespace fdv {

ThresholdClass::ThresholdClass(std::vector<double> thresholds, bool with_breakpoints)
    : values_(std::move(thresholds)), with_breakpoints_(with_breakpoints) {
  if (values_.empty()) throw PreconditionError("threshold grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw PreconditionError("threshold grid must be sorted and distinct");
    }
    grid_.push_back(Dyadic::from_double(values_[i]));
  }
}

ThresholdClass ThresholdClass::uniform(std::size_t points, bool with_breakpoints) {
  if (points < 2) throw PreconditionError("threshold grid needs at least 2 points");
  std::vector<double> v(points + 1);
  for (std::size_t k = 0; k < points; ++k) {
    v[k] = static_cast<double>(k) / static_cast<double>(points - 1);
  }
  v[points] = kAboveOne;
  return ThresholdClass(std::move(v), with_breakpoints);
}

WeightedExample::WeightedExample(double x_, double y_, double w_)
    : x(Dyadic::from_double(x_)), y(y_), w(w_) {
  if (!(x_ >= 0.0 && x_ <= 1.0)) throw DomainError("example context outside [0,1]");
}

ErmResult erm_profile(const ThresholdClass& cls, std::span<const ProfileEntry> sorted) {
  const auto& grid = cls.grid();
  if (grid.empty()) throw PreconditionError("threshold grid is empty");
  double base = 0.0;
  for (const auto& e : sorted) base += e.cost.plus;

  const Dyadic* best_theta = nullptr;
  double best = 0.0;
  double acc = 0.0;
  std::size_t i = 0;  // profile entries strictly below the current candidate
  std::size_t gi = 0, bi = 0;
  const bool bp = cls.with_breakpoints();
  while (gi < grid.size() || (bp && bi < sorted.size())) {
    const Dyadic* cand;
    if (!bp || bi >= sorted.size() || (gi < grid.size() && grid[gi] <= *sorted[bi].x)) {
      cand = &grid[gi++];
    } else {
      cand = sorted[bi++].x;
    }
    while (i < sorted.size() && *sorted[i].x < *cand) {
      acc += sorted[i].cost.minus - sorted[i].cost.plus;
      ++i;
    }
    double value = base + acc;
    if (best_theta == nullptr || value < best) {
      best = value;
      best_theta = cand;
    }
  }
  return {*best_theta, best};
}

ErmResult erm_oracle(const ThresholdClass& cls, std::span<const WeightedExample> data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data[a].x < data[b].x; });
  std::vector<ProfileEntry> profile;
  profile.reserve(data.size());
  for (std::size_t k : order) {
    Cost c;
    c.add(data[k].y, data[k].w);
    profile.push_back({&data[k].x, c});
  }
  return erm_profile(cls, profile);
}

double empirical_loss(const Dyadic& theta, std::span<const WeightedExample> data) {
  double s = 0.0;
  for (const auto& e : data) s += e.w * linear_loss(threshold_predict(theta, e.x), e.y);
  return s;
}

}  // namespace fdv
