#include "sumk/exact.hpp"

#include <stdexcept>
#include <string>

namespace sumk {

ExactSolution exact_solve(const Instance& inst, std::int64_t cap) {
  const std::int64_t W = inst.capacity;
  if (W > cap) {
    throw std::runtime_error(
        "exact_solve: capacity " + std::to_string(W) + " exceeds the cap of " +
        std::to_string(cap) + "; use the approximation scheme instead");
  }
  for (const auto& type : inst.types) {
    if (type.dist.min_value() < 1) {
      throw InstanceError("exact_solve requires positive support; normalize first");
    }
  }

  ExactSolution sol;
  sol.capacity = W;
  sol.opt.assign(static_cast<std::size_t>(W) + 1, 0.0);
  sol.best_type.assign(static_cast<std::size_t>(W) + 1, -1);

  for (std::int64_t w = 1; w <= W; ++w) {
    double best = 0.0;
    int best_idx = -1;
    for (std::size_t j = 0; j < inst.types.size(); ++j) {
      const ItemType& type = inst.types[j];
      double value = type.cost;
      const auto& values = type.dist.values();
      const auto& probs = type.dist.probs();
      for (std::size_t k = 0; k < values.size() && values[k] < w; ++k) {
        value += probs[k] * sol.opt[static_cast<std::size_t>(w - values[k])];
      }
      if (best_idx < 0 || value < best) {
        best = value;
        best_idx = static_cast<int>(j);
      }
    }
    sol.opt[static_cast<std::size_t>(w)] = best;
    sol.best_type[static_cast<std::size_t>(w)] = best_idx;
  }
  return sol;
}

int exact_policy(const ExactSolution& sol, std::int64_t w) {
  if (w < 1 || w > sol.capacity) {
    throw std::out_of_range("exact_policy: residual capacity " +
                            std::to_string(w) + " outside [1, " +
                            std::to_string(sol.capacity) + "]");
  }
  return sol.best_type[static_cast<std::size_t>(w)];
}

}  // namespace sumk
