#pragma once

#include <cstdint>
#include <vector>

#include "sumk/instance.hpp"
#include "sumk/query_counter.hpp"

namespace sumk {

/// Constant-factor estimate of the optimal cost: OPT_W/4 <= T <= OPT_W.
struct Estimate {
  double T = 0.0;
  std::vector<double> rounded_means;  // per type, within [E[X]/2, E[X]]
  int best_ratio_type = -1;           // argmin cost / rounded mean, lowest index on ties
};

/// Power-of-two rounded expectation of the item weight: every realized weight
/// x counts as 2^floor(log2 x). Uses O(log W) CDF queries and lands in
/// [E[X]/2, E[X]]. Requires positive support clamped to <= W.
double rounded_mean(const ItemType& type, std::int64_t W,
                    QueryCounter* counter = nullptr);

/// T = (W/2) * min_i cost_i / rounded_mean_i, a 4-approximation scaffold for
/// the discretization grid. Pure; O(n log W) CDF queries total.
Estimate estimate_T(const Instance& inst, QueryCounter* counter = nullptr);

}  // namespace sumk
