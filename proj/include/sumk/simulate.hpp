#pragma once

#include <cstdint>
#include <functional>

#include "sumk/frontier.hpp"
#include "sumk/instance.hpp"

namespace sumk {

struct SimResult {
  std::int64_t trials = 0;
  double mean_cost = 0.0;
  double stderr_mean = 0.0;  // sample stdev / sqrt(trials)
  double mean_items = 0.0;
  std::uint64_t seed = 0;
};

/// Monte Carlo evaluation of a policy: each trial starts at full capacity,
/// repeatedly pays for the policy's block and subtracts the realized weights
/// until the capacity is covered. Positive support guarantees termination
/// within capacity insertions. Per-trial RNG substreams keyed by
/// (seed, trial) make the result reproducible.
SimResult simulate(const Instance& inst,
                   const std::function<PolicyAction(std::int64_t)>& policy,
                   std::int64_t trials, std::uint64_t seed);

}  // namespace sumk
