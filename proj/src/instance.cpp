#include "sumk/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace sumk {

namespace {

constexpr double kProbSumTolerance = 1e-12;
constexpr std::int64_t kMaxCapacity = 1'000'000'000'000'000;  // 1e15

}  // namespace

WeightDistribution::WeightDistribution(
    std::vector<std::pair<std::int64_t, double>> support) {
  if (support.empty()) {
    throw InstanceError("weight distribution has empty support");
  }
  std::sort(support.begin(), support.end());
  double sum = 0.0;
  values_.reserve(support.size());
  probs_.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto [value, prob] = support[i];
    if (value < 0) {
      throw InstanceError("weight value " + std::to_string(value) +
                          " is negative");
    }
    if (i > 0 && value == values_.back()) {
      throw InstanceError("duplicate support value " + std::to_string(value));
    }
    if (!(prob > 0.0) || prob > 1.0) {
      throw InstanceError("probability " + std::to_string(prob) +
                          " outside (0, 1]");
    }
    values_.push_back(value);
    probs_.push_back(prob);
    sum += prob;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << sum << ", off by more than 1e-12";
    throw InstanceError(msg.str());
  }
  cum_.reserve(probs_.size());
  double acc = 0.0;
  for (double& p : probs_) {
    p /= sum;
    acc += p;
    cum_.push_back(acc);
  }
  cum_.back() = 1.0;
}

double WeightDistribution::cdf(std::int64_t j) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), j);
  if (it == values_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

double WeightDistribution::tail(std::int64_t j) const {
  if (j <= values_.front()) return 1.0;
  return 1.0 - cdf(j - 1);
}

double WeightDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    m += static_cast<double>(values_[i]) * probs_[i];
  }
  return m;
}

double WeightDistribution::prob_at(std::int64_t value) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || *it != value) return 0.0;
  return probs_[static_cast<std::size_t>(it - values_.begin())];
}

std::int64_t WeightDistribution::sample(double u) const {
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) --it;
  return values_[static_cast<std::size_t>(it - cum_.begin())];
}

namespace {

ItemType clamp_type(ItemType type, std::int64_t capacity) {
  if (type.dist.max_value() <= capacity) return type;
  std::vector<std::pair<std::int64_t, double>> support;
  double clamped_mass = 0.0;
  for (std::size_t i = 0; i < type.dist.size(); ++i) {
    const std::int64_t v = type.dist.values()[i];
    const double p = type.dist.probs()[i];
    if (v >= capacity) {
      clamped_mass += p;
    } else {
      support.emplace_back(v, p);
    }
  }
  support.emplace_back(capacity, clamped_mass);
  return ItemType{type.cost, WeightDistribution(std::move(support))};
}

}  // namespace

Instance make_instance(std::int64_t capacity, std::vector<ItemType> types) {
  if (capacity < 1) {
    throw InstanceError("capacity must be >= 1");
  }
  if (capacity > kMaxCapacity) {
    throw InstanceError("capacity too large");
  }
  if (types.empty()) {
    throw InstanceError("instance has no item types");
  }
  for (auto& type : types) {
    if (!(type.cost >= 0.0) || !std::isfinite(type.cost)) {
      throw InstanceError("item cost must be a finite non-negative number");
    }
    type = clamp_type(std::move(type), capacity);
  }
  return Instance{capacity, std::move(types)};
}

Instance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("malformed instance JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("capacity") || !doc.contains("types")) {
    throw InstanceError("instance JSON must be an object with 'capacity' and 'types'");
  }
  const auto& cap = doc["capacity"];
  if (!cap.is_number_integer() || cap.get<std::int64_t>() < 1) {
    throw InstanceError("'capacity' must be a positive integer");
  }
  const auto& types_json = doc["types"];
  if (!types_json.is_array() || types_json.empty()) {
    throw InstanceError("'types' must be a non-empty array");
  }
  std::vector<ItemType> types;
  types.reserve(types_json.size());
  for (const auto& t : types_json) {
    if (!t.is_object() || !t.contains("cost") || !t.contains("dist")) {
      throw InstanceError("each type needs 'cost' and 'dist'");
    }
    if (!t["cost"].is_number()) {
      throw InstanceError("'cost' must be a number");
    }
    const double cost = t["cost"].get<double>();
    if (!(cost >= 0.0) || !std::isfinite(cost)) {
      throw InstanceError("negative cost");
    }
    const auto& dist_json = t["dist"];
    if (!dist_json.is_array() || dist_json.empty()) {
      throw InstanceError("'dist' must be a non-empty array of [value, prob] pairs");
    }
    std::vector<std::pair<std::int64_t, double>> support;
    support.reserve(dist_json.size());
    for (const auto& entry : dist_json) {
      if (!entry.is_array() || entry.size() != 2 || !entry[1].is_number()) {
        throw InstanceError("'dist' entries must be [value, prob] pairs");
      }
      if (!entry[0].is_number_integer()) {
        throw InstanceError("weight values must be integers");
      }
      support.emplace_back(entry[0].get<std::int64_t>(), entry[1].get<double>());
    }
    types.push_back(ItemType{cost, WeightDistribution(std::move(support))});
  }
  return make_instance(cap.get<std::int64_t>(), std::move(types));
}

std::string instance_to_json(const Instance& inst) {
  nlohmann::json doc;
  doc["capacity"] = inst.capacity;
  nlohmann::json types = nlohmann::json::array();
  for (const auto& type : inst.types) {
    nlohmann::json dist = nlohmann::json::array();
    for (std::size_t i = 0; i < type.dist.size(); ++i) {
      dist.push_back({type.dist.values()[i], type.dist.probs()[i]});
    }
    types.push_back({{"cost", type.cost}, {"dist", std::move(dist)}});
  }
  doc["types"] = std::move(types);
  return doc.dump(2);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InstanceError("cannot open instance file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

Instance normalize_positive_support(const Instance& inst,
                                    std::vector<int>* dropped) {
  std::vector<ItemType> types;
  types.reserve(inst.types.size());
  for (std::size_t idx = 0; idx < inst.types.size(); ++idx) {
    const ItemType& type = inst.types[idx];
    const double p0 = type.dist.prob_at(0);
    if (p0 == 0.0) {
      types.push_back(type);
      continue;
    }
    if (type.dist.size() == 1) {
      // All mass at weight 0: the type can never make progress.
      if (dropped != nullptr) dropped->push_back(static_cast<int>(idx));
      continue;
    }
    const double keep = 1.0 - p0;
    std::vector<std::pair<std::int64_t, double>> support;
    support.reserve(type.dist.size() - 1);
    for (std::size_t i = 0; i < type.dist.size(); ++i) {
      const std::int64_t v = type.dist.values()[i];
      if (v == 0) continue;
      support.emplace_back(v, type.dist.probs()[i] / keep);
    }
    types.push_back(ItemType{type.cost / keep, WeightDistribution(std::move(support))});
  }
  if (types.empty()) {
    throw InstanceError("infeasible: every type has all weight mass at 0");
  }
  return Instance{inst.capacity, std::move(types)};
}

double cdf(const ItemType& type, std::int64_t j, QueryCounter* counter) {
  if (counter != nullptr) ++counter->cdf;
  return type.dist.cdf(j);
}

}  // namespace sumk
