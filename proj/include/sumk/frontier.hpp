#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumk/query_counter.hpp"
#include "sumk/tail_array.hpp"

namespace sumk {

/// Discretization parameters of the frontier DP.
struct DpConfig {
  double epsilon = 0.0;
  int num_types = 0;
  double T = 0.0;      // constant-factor estimate of the optimum
  double delta = 0.0;  // epsilon^2 / (100 n)
  double theta = 0.0;  // epsilon / (10 n)

  static DpConfig make(double epsilon, int num_types, double T);

  /// One unit of the discretized cost grid.
  double grid_step() const { return delta * T; }
  /// Minimum admissible item cost for the DP.
  double expensive_floor() const { return theta * T; }
};

/// One DP input: a (possibly bundled) type and its weight tail array.
struct DpItem {
  double cost = 0.0;
  TailArray tail;
  int source_type = 0;
  std::int64_t multiplicity = 1;
};

/// Capacity frontier: f[i] is the largest capacity coverable within i grid
/// units of cost, witness[i] the lowest-index item certifying it (-1 while
/// f[i] == 0). f is non-decreasing with f[0] == 0.
struct FrontierTable {
  std::vector<std::int64_t> f;
  std::vector<int> witness;
};

enum class DpMode { kAuto, kFrontier, kDense };

struct FrontierResult {
  FrontierTable table;
  double value = 0.0;       // smallest grid value whose frontier reaches W
  std::int64_t steps = 0;   // grid index of that value
};

struct Feasibility {
  bool feasible = false;
  int witness = -1;
};

/// Can some item cover capacity w within a budget of i = |frontier_prefix|
/// grid units, given the already-computed frontier prefix f[0..i-1]? The
/// residual-cost intervals are read off the item tail arrays; the
/// lowest-index item that fits becomes the witness.
Feasibility frontier_feasible(const std::vector<DpItem>& items,
                              std::span<const std::int64_t> frontier_prefix,
                              std::int64_t w, const DpConfig& cfg,
                              QueryCounter* counter = nullptr);

/// Runs the frontier DP until the capacity is covered and returns the grid
/// value reached. Every item cost must be at least theta*T.
///
/// kFrontier finds each f[i] by integer binary search over [f[i-1], W]
/// (the coverage predicate is monotone in w). kDense solves the same
/// recurrence indexed by capacity instead of cost level, which is far faster
/// when W is small and the grid is fine; kAuto picks dense for W <= 4096.
/// Both modes produce the same table up to floating-point ties.
FrontierResult build_frontier(const std::vector<DpItem>& items, std::int64_t W,
                              const DpConfig& cfg, DpMode mode = DpMode::kAuto,
                              QueryCounter* counter = nullptr);

struct PolicyAction {
  int type = -1;
  std::int64_t count = 1;
};

/// Deterministic block policy: maps residual capacity to the witness of the
/// first frontier entry covering it. Total on [1, f.back()].
class BlockPolicy {
 public:
  BlockPolicy(FrontierTable table, std::vector<PolicyAction> actions);

  PolicyAction action(std::int64_t remaining) const;
  std::int64_t max_capacity() const { return table_.f.back(); }

 private:
  FrontierTable table_;
  std::vector<PolicyAction> actions_;
};

BlockPolicy extract_policy(const FrontierTable& table,
                           const std::vector<DpItem>& items);

}  // namespace sumk
