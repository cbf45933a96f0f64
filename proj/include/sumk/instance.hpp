#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sumk/query_counter.hpp"

namespace sumk {

/// Invalid or infeasible instance data. The CLI maps this to exit code 2.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discrete weight distribution with sorted, distinct integer support and a
/// precomputed cumulative table for O(log |support|) CDF queries.
///
/// Support values are non-negative; a solver-ready distribution has all
/// values >= 1 (see normalize_positive_support).
class WeightDistribution {
 public:
  /// Validates and takes ownership of a support list. Sorts by value,
  /// rejects duplicates, values < 0, probabilities outside (0, 1], and
  /// probability sums further than 1e-12 from 1 (closer sums are
  /// renormalized to exactly 1).
  explicit WeightDistribution(std::vector<std::pair<std::int64_t, double>> support);

  /// Pr{X <= j}. Defined for any j; 0 below the support, 1 at or above its max.
  double cdf(std::int64_t j) const;

  /// Pr{X >= j}; 1 for j <= min support.
  double tail(std::int64_t j) const;

  double mean() const;

  /// Probability mass at an exact value, 0 if absent.
  double prob_at(std::int64_t value) const;

  /// Inverse-CDF draw for u in [0, 1).
  std::int64_t sample(double u) const;

  std::int64_t min_value() const { return values_.front(); }
  std::int64_t max_value() const { return values_.back(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::int64_t>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<std::int64_t> values_;
  std::vector<double> probs_;
  std::vector<double> cum_;  // inclusive prefix sums; back() == 1
};

struct ItemType {
  double cost = 0.0;
  WeightDistribution dist;
};

/// A knapsack instance: capacity plus item types. Immutable after
/// construction; safe to share across concurrent solver runs.
struct Instance {
  std::int64_t capacity = 0;
  std::vector<ItemType> types;
};

/// Assembles and validates an instance. Support values above the capacity are
/// clamped to it (any realized weight >= W finishes the knapsack identically),
/// merging the clamped mass into a single point at W.
Instance make_instance(std::int64_t capacity, std::vector<ItemType> types);

/// Parses the JSON instance format:
///   {"capacity": <uint>, "types": [{"cost": <float>, "dist": [[<value>, <prob>], ...]}, ...]}
/// Throws InstanceError on malformed input.
Instance parse_instance(const std::string& text);

/// Canonical serialization: dist sorted by value ascending, stable key order.
std::string instance_to_json(const Instance& inst);

/// Reads and parses an instance file.
Instance load_instance(const std::string& path);

/// Folds probability mass at weight 0 into the cost: a type that may realize
/// weight 0 is re-inserted until a positive weight appears, which is
/// equivalent to cost c/(1-d(0)) with the conditional distribution on
/// positive values. Types with all mass at 0 are dropped (indices reported
/// through `dropped` when non-null); if every type is dropped the instance is
/// infeasible. Idempotent; the optimal expected cost is unchanged.
Instance normalize_positive_support(const Instance& inst,
                                    std::vector<int>* dropped = nullptr);

/// CDF oracle access point; bumps the counter when one is supplied.
double cdf(const ItemType& type, std::int64_t j, QueryCounter* counter = nullptr);

}  // namespace sumk
