#pragma once

#include <cstdint>
#include <vector>

#include "sumk/instance.hpp"

namespace sumk {

/// Full table of a pseudo-polynomial exact solve: opt[w] is the optimal
/// expected cost to cover residual capacity w, best_type[w] the argmin type
/// (lowest index on ties). opt_at extends the table with opt = 0 for w <= 0.
struct ExactSolution {
  std::int64_t capacity = 0;
  std::vector<double> opt;        // indexed 0..capacity; opt[0] == 0
  std::vector<int> best_type;     // indexed 0..capacity; [0] == -1

  double opt_at(std::int64_t w) const {
    return w <= 0 ? 0.0 : opt[static_cast<std::size_t>(w)];
  }
  double value() const { return opt.back(); }
};

inline constexpr std::int64_t kDefaultExactCap = 1'000'000;

/// Bellman recursion over residual capacity with sparse per-type supports.
/// Requires positive support (normalize first). Refuses capacities above
/// `cap` — use the approximation scheme there instead.
ExactSolution exact_solve(const Instance& inst,
                          std::int64_t cap = kDefaultExactCap);

/// Optimal type to insert at residual capacity w, 1 <= w <= capacity.
int exact_policy(const ExactSolution& sol, std::int64_t w);

}  // namespace sumk
