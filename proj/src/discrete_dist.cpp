#include "fdiv/discrete_dist.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "fdiv/errors.hpp"

namespace fdv {

DiscreteDist::DiscreteDist(std::vector<std::string> labels, std::vector<double> masses)
    : DiscreteDist(std::move(labels),
                   Eigen::Map<const Eigen::VectorXd>(masses.data(),
                                                     static_cast<Eigen::Index>(masses.size()))) {}

DiscreteDist::DiscreteDist(std::vector<std::string> labels, const Eigen::VectorXd& masses)
    : labels_(std::move(labels)), masses_(masses) {
  if (labels_.empty()) throw DataError("distribution has no atoms");
  if (static_cast<Eigen::Index>(labels_.size()) != masses_.size()) {
    throw DataError("label and mass counts differ");
  }
  for (Eigen::Index i = 0; i < masses_.size(); ++i) {
    if (!std::isfinite(masses_[i]) || masses_[i] < 0.0) {
      throw DataError("mass of '" + labels_[i] + "' is negative or not finite");
    }
  }
  double total = masses_.sum();
  if (std::abs(total - 1.0) > kRenormTolerance) {
    throw DataError("masses sum to " + std::to_string(total) + ", not 1");
  }
  if (std::abs(total - 1.0) > kSumTolerance) masses_ /= total;
  build_index();
}

void DiscreteDist::build_index() {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw DataError("duplicate label '" + labels_[i] + "'");
    }
  }
}

DiscreteDist DiscreteDist::point(const std::string& label) {
  return DiscreteDist({label}, std::vector<double>{1.0});
}

DiscreteDist DiscreteDist::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli p outside [0,1]");
  return DiscreteDist({"1", "0"}, std::vector<double>{p, 1.0 - p});
}

DiscreteDist DiscreteDist::uniform(std::vector<std::string> labels) {
  std::vector<double> m(labels.size(), 1.0 / static_cast<double>(labels.size()));
  return DiscreteDist(std::move(labels), std::move(m));
}

std::optional<std::size_t> DiscreteDist::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double DiscreteDist::mass_of(const std::string& label) const {
  auto i = find(label);
  return i ? masses_[static_cast<Eigen::Index>(*i)] : 0.0;
}

AlignedPair align(const DiscreteDist& nu, const DiscreteDist& mu) {
  AlignedPair out;
  if (nu.labels() == mu.labels()) {
    out.labels = nu.labels();
    out.nu = nu.masses();
    out.mu = mu.masses();
    return out;
  }
  out.labels = nu.labels();
  std::vector<std::size_t> extra;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!nu.find(mu.label(i))) extra.push_back(i);
  }
  for (auto i : extra) out.labels.push_back(mu.label(i));
  auto n = static_cast<Eigen::Index>(out.labels.size());
  out.nu = Eigen::VectorXd::Zero(n);
  out.mu = Eigen::VectorXd::Zero(n);
  out.nu.head(nu.masses().size()) = nu.masses();
  for (Eigen::Index i = 0; i < n; ++i) out.mu[i] = mu.mass_of(out.labels[i]);
  return out;
}

DiscreteDist dist_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DataError("distribution JSON must be an array");
  std::vector<std::string> labels;
  std::vector<double> masses;
  for (const auto& atom : j) {
    if (!atom.is_object() || !atom.contains("label") || !atom.contains("mass") ||
        !atom["label"].is_string() || !atom["mass"].is_number()) {
      throw DataError("each atom needs a string 'label' and a numeric 'mass'");
    }
    labels.push_back(atom["label"].get<std::string>());
    masses.push_back(atom["mass"].get<double>());
  }
  return DiscreteDist(std::move(labels), std::move(masses));
}

nlohmann::json dist_to_json(const DiscreteDist& d) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    j.push_back({{"label", d.label(i)}, {"mass", d.mass(i)}});
  }
  return j;
}

DiscreteDist load_dist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_missing", "cannot open " + path, true);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad_json", path + ": " + e.what(), true);
  }
  return dist_from_json(j);
}

}  // namespace fdv
