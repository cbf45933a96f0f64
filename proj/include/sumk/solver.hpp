#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sumk/estimator.hpp"
#include "sumk/frontier.hpp"
#include "sumk/instance.hpp"
#include "sumk/query_counter.hpp"
#include "sumk/tail_array.hpp"

namespace sumk {

/// A bundled pseudo-type: `multiplicity` items of the source type inserted
/// together, with the tail array of their weight sum. Expensive types keep
/// multiplicity 1 and their exact single-item tail.
struct BlockType {
  int source_type = 0;
  std::int64_t multiplicity = 1;
  double cost = 0.0;  // multiplicity * source cost
  TailArray tail;
};

struct BlockSummary {
  int source_type = 0;
  std::int64_t multiplicity = 1;
  double cost = 0.0;
  std::int64_t breakpoints = 0;
};

struct SolveOptions {
  DpMode dp_mode = DpMode::kAuto;
};

struct SolveReport {
  double value = 0.0;
  double epsilon = 0.0;
  double T = 0.0;
  double delta = 0.0;
  double theta = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
  std::int64_t capacity = 0;
  int num_types = 0;
  double min_block_cost = 0.0;
  std::vector<BlockSummary> blocks;
  std::int64_t frontier_len = 0;
  QueryCounter queries;
  bool degenerate = false;   // zero-cost type short-circuit
  double wall_time_ms = 0.0; // excluded from the canonical JSON
};

/// Groups cheap types into power-of-two blocks whose cost lands in
/// [theta*T, 2*theta*T) and computes their approximate weight-sum tails.
std::vector<BlockType> bundle_types(const Instance& inst, const DpConfig& cfg,
                                    const ApproxParams& params,
                                    QueryCounter* counter = nullptr);

/// Full approximation pipeline: normalize, estimate T, bundle, run the
/// frontier DP. The returned value satisfies
/// (1-epsilon) OPT <= value <= (1+epsilon) OPT. Deterministic.
SolveReport solve(const Instance& inst, double epsilon,
                  const SolveOptions& opts = {});

struct PolicySolve {
  SolveReport report;
  BlockPolicy policy;
};

/// Same pipeline, additionally extracting the induced block-insertion policy.
/// Policy type indices refer to the normalized instance.
PolicySolve solve_policy(const Instance& inst, double epsilon,
                         const SolveOptions& opts = {});

/// Canonical JSON serialization of a report. Timing is included only on
/// request so that repeated runs stay byte-identical.
std::string report_to_json(const SolveReport& report, bool include_timing = false);

}  // namespace sumk
