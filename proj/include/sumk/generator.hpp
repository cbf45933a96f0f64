#pragma once

#include <cstdint>

#include "sumk/instance.hpp"

namespace sumk {

/// Shape of a random instance. Values are drawn from [1, capacity],
/// probabilities normalized to sum to 1, costs uniform in the cost range.
struct GenSpec {
  int num_types = 1;
  std::int64_t capacity = 10;
  int max_support = 4;
  double cost_min = 0.1;
  double cost_max = 10.0;
  std::uint64_t seed = 0;
};

/// Deterministic per seed; the output round-trips through parse_instance.
Instance generate_instance(const GenSpec& spec);

}  // namespace sumk
