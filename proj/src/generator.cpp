#include "sumk/generator.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sumk/rng.hpp"

namespace sumk {

Instance generate_instance(const GenSpec& spec) {
  if (spec.num_types < 1 || spec.capacity < 1 || spec.max_support < 1 ||
      !(spec.cost_min > 0.0) || spec.cost_max < spec.cost_min) {
    throw std::invalid_argument("generate_instance: impossible spec");
  }
  TrialRng rng(spec.seed, 0);
  std::vector<ItemType> types;
  types.reserve(static_cast<std::size_t>(spec.num_types));
  const auto value_range = static_cast<std::uint64_t>(
      std::min<std::int64_t>(spec.max_support, spec.capacity));
  for (int t = 0; t < spec.num_types; ++t) {
    const auto points = 1 + rng.next_u64() % value_range;
    std::vector<std::int64_t> values;
    while (values.size() < points) {
      const auto v = static_cast<std::int64_t>(
          1 + rng.next_u64() % static_cast<std::uint64_t>(spec.capacity));
      if (std::find(values.begin(), values.end(), v) == values.end()) {
        values.push_back(v);
      }
    }
    std::sort(values.begin(), values.end());

    std::vector<double> raw(values.size());
    double sum = 0.0;
    for (double& r : raw) {
      r = 0.05 + 0.95 * rng.next_unit();
      sum += r;
    }
    std::vector<std::pair<std::int64_t, double>> support;
    support.reserve(values.size());
    double assigned = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double p = raw[i] / sum;
      support.emplace_back(values[i], p);
      assigned += p;
    }
    support.emplace_back(values.back(), 1.0 - assigned);

    const double cost =
        spec.cost_min + (spec.cost_max - spec.cost_min) * rng.next_unit();
    types.push_back(ItemType{cost, WeightDistribution(std::move(support))});
  }
  return make_instance(spec.capacity, std::move(types));
}

}  // namespace sumk
