#include "sumk/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "sumk/rng.hpp"

namespace sumk {

SimResult simulate(const Instance& inst,
                   const std::function<PolicyAction(std::int64_t)>& policy,
                   std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("simulate: trials must be >= 1");
  }
  for (const ItemType& type : inst.types) {
    if (type.dist.min_value() < 1) {
      throw InstanceError("simulate requires positive support; normalize first");
    }
  }

  double mean = 0.0;
  double m2 = 0.0;
  double mean_items = 0.0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    TrialRng rng(seed, static_cast<std::uint64_t>(trial));
    std::int64_t remaining = inst.capacity;
    double cost = 0.0;
    std::int64_t items = 0;
    while (remaining > 0) {
      const PolicyAction act = policy(remaining);
      if (act.type < 0 ||
          act.type >= static_cast<int>(inst.types.size()) || act.count < 1) {
        throw std::logic_error("simulate: policy returned an invalid action");
      }
      const ItemType& type = inst.types[static_cast<std::size_t>(act.type)];
      cost += type.cost * static_cast<double>(act.count);
      items += act.count;
      for (std::int64_t k = 0; k < act.count; ++k) {
        remaining -= type.dist.sample(rng.next_unit());
      }
    }
    const double d = cost - mean;
    mean += d / static_cast<double>(trial + 1);
    m2 += d * (cost - mean);
    mean_items += (static_cast<double>(items) - mean_items) /
                  static_cast<double>(trial + 1);
  }

  SimResult result;
  result.trials = trials;
  result.mean_cost = mean;
  result.stderr_mean =
      trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1) /
                             static_cast<double>(trials))
                 : 0.0;
  result.mean_items = mean_items;
  result.seed = seed;
  return result;
}

}  // namespace sumk
