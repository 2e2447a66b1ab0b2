#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fdiv/online/dyadic.hpp"

namespace fdv {

// g_theta(x) = +1 if x >= theta else -1
inline int threshold_predict(const Dyadic& theta, const Dyadic& x) { return x >= theta ? 1 : -1; }

// Linear loss (1 - yhat y) / 2.
inline double linear_loss(double yhat, double y) { return 0.5 * (1.0 - yhat * y); }

/*
 * Candidate thresholds for the ERM sweep. The grid always ends with a point
 * above 1 ("1+", the all-negative hypothesis). With breakpoints enabled the
 * sweep also tries every data point as a threshold, which makes the oracle
 * exact over all thresholds on [0,1].
 */
class ThresholdClass {
 public:
  static constexpr double kAboveOne = 1.5;

  explicit ThresholdClass(std::vector<double> thresholds, bool with_breakpoints = false);
  // k/(points-1) for k < points, then 1+.
  static ThresholdClass uniform(std::size_t points, bool with_breakpoints = false);

  const std::vector<Dyadic>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  bool with_breakpoints() const { return with_breakpoints_; }

 private:
  std::vector<double> values_;
  std::vector<Dyadic> grid_;
  bool with_breakpoints_;
};

struct WeightedExample {
  WeightedExample(double x_, double y_, double w_);
  WeightedExample(Dyadic x_, double y_, double w_) : x(std::move(x_)), y(y_), w(w_) {}
  Dyadic x;
  double y;
  double w;
};

// Aggregated weight of the examples at one context: `plus` is the loss paid
// if g(x) = +1, `minus` if g(x) = -1. An example (x, y, w) adds
// w(1-y)/2 and w(1+y)/2 respectively.
struct Cost {
  double plus = 0.0;
  double minus = 0.0;
  void add(double y, double w) {
    plus += 0.5 * w * (1.0 - y);
    minus += 0.5 * w * (1.0 + y);
  }
  bool zero() const { return plus == 0.0 && minus == 0.0; }
};

struct ProfileEntry {
  const Dyadic* x;
  Cost cost;
};

struct ErmResult {
  Dyadic theta;
  double value = 0.0;
};

// Exact weighted ERM by one sorted sweep; ties go to the smallest theta.
ErmResult erm_oracle(const ThresholdClass& cls, std::span<const WeightedExample> data);
// Same sweep on a profile already sorted by context.
ErmResult erm_profile(const ThresholdClass& cls, std::span<const ProfileEntry> sorted);

// Loss of g_theta on the data, by direct summation.
double empirical_loss(const Dyadic& theta, std::span<const WeightedExample> data);

// Counts oracle calls for the regret accounting.
class ErmOracle {
 public:
  explicit ErmOracle(const ThresholdClass& cls) : cls_(&cls) {}
  ErmResult operator()(std::span<const ProfileEntry> sorted) {
    ++calls_;
    return erm_profile(*cls_, sorted);
  }
  ErmResult operator()(std::span<const WeightedExample> data) {
    ++calls_;
    return erm_oracle(*cls_, data);
  }
  std::int64_t calls() const { return calls_; }
  const ThresholdClass& threshold_class() const { return *cls_; }

 private:
  const ThresholdClass* cls_;
  std::int64_t calls_ = 0;
};

}  // namespace fdv
