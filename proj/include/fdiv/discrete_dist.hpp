#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace fdv {

// Finite distribution over labeled atoms. Masses are validated on
// construction: nonnegative, distinct labels, sum within 1e-9 of one
// (renormalized), otherwise rejected.
class DiscreteDist {
 public:
  static constexpr double kSumTolerance = 1e-12;
  static constexpr double kRenormTolerance = 1e-9;

  DiscreteDist(std::vector<std::string> labels, std::vector<double> masses);
  DiscreteDist(std::vector<std::string> labels, const Eigen::VectorXd& masses);

  static DiscreteDist point(const std::string& label);
  // Labels "1" (mass p) and "0" (mass 1 - p).
  static DiscreteDist bernoulli(double p);
  static DiscreteDist uniform(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::VectorXd& masses() const { return masses_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  double mass(std::size_t i) const { return masses_[i]; }

  std::optional<std::size_t> find(const std::string& label) const;
  double mass_of(const std::string& label) const;

  friend bool operator==(const DiscreteDist& a, const DiscreteDist& b) {
    return a.labels_ == b.labels_ && a.masses_ == b.masses_;
  }

 private:
  void build_index();
  std::vector<std::string> labels_;
  Eigen::VectorXd masses_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Two distributions laid out over the union of their labels: atoms of the
// first argument in order, then atoms only in the second.
struct AlignedPair {
  std::vector<std::string> labels;
  Eigen::VectorXd nu;
  Eigen::VectorXd mu;
};

AlignedPair align(const DiscreteDist& nu, const DiscreteDist& mu);

// [{"label": string, "mass": number}, ...]
DiscreteDist dist_from_json(const nlohmann::json& j);
nlohmann::json dist_to_json(const DiscreteDist& d);
DiscreteDist load_dist(const std::string& path);

}  // namespace fdv
