#include "sumk/solver.hpp"

#include <chrono>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace sumk {

std::vector<BlockType> bundle_types(const Instance& inst, const DpConfig& cfg,
                                    const ApproxParams& params,
                                    QueryCounter* counter) {
  const double floor = cfg.expensive_floor();
  std::vector<BlockType> blocks;
  blocks.reserve(inst.types.size());
  for (std::size_t p = 0; p < inst.types.size(); ++p) {
    const ItemType& type = inst.types[p];
    TailArray base = TailArray::from_distribution(type.dist, inst.capacity);
    if (counter != nullptr) counter->cdf += type.dist.size();
    if (type.cost >= floor) {
      blocks.push_back(BlockType{static_cast<int>(p), 1, type.cost, std::move(base)});
      continue;
    }
    std::int64_t multiplicity = 1;
    double cost = type.cost;
    while (cost < floor) {
      multiplicity <<= 1;
      cost *= 2.0;  // exact, keeps cost == multiplicity * type.cost
    }
    if (multiplicity > inst.capacity) {
      throw std::logic_error(
          "bundle_types: block multiplicity exceeds the capacity; the cost "
          "estimate T is inconsistent");
    }
    blocks.push_back(BlockType{static_cast<int>(p), multiplicity, cost,
                               approx_iid_sum(base, multiplicity, params)});
  }
  return blocks;
}

namespace {

int find_zero_cost(const Instance& inst) {
  for (std::size_t i = 0; i < inst.types.size(); ++i) {
    if (inst.types[i].cost == 0.0) return static_cast<int>(i);
  }
  return -1;
}

struct PipelineOutput {
  SolveReport report;
  FrontierTable table;
  std::vector<DpItem> items;
  int zero_cost_type = -1;
};

PipelineOutput run_pipeline(const Instance& inst, double epsilon,
                            const SolveOptions& opts) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  const auto started = std::chrono::steady_clock::now();

  PipelineOutput out;
  Instance norm = normalize_positive_support(inst);
  SolveReport& report = out.report;
  report.epsilon = epsilon;
  report.capacity = norm.capacity;
  report.num_types = static_cast<int>(norm.types.size());

  out.zero_cost_type = find_zero_cost(norm);
  if (out.zero_cost_type >= 0) {
    // A free type with positive weight finishes the knapsack at no cost.
    report.value = 0.0;
    report.degenerate = true;
    out.items.push_back(DpItem{0.0,
                               TailArray::from_distribution(
                                   norm.types[static_cast<std::size_t>(
                                       out.zero_cost_type)].dist,
                                   norm.capacity),
                               out.zero_cost_type, 1});
    return out;
  }

  QueryCounter counter;
  const Estimate estimate = estimate_T(norm, &counter);
  const DpConfig cfg = DpConfig::make(epsilon, report.num_types, estimate.T);
  const ApproxParams params = ApproxParams::from_epsilon(epsilon, norm.capacity);
  report.T = estimate.T;
  report.delta = cfg.delta;
  report.theta = cfg.theta;
  report.eta = params.eta;
  report.zeta = params.zeta;

  std::vector<BlockType> blocks = bundle_types(norm, cfg, params, &counter);
  report.blocks.reserve(blocks.size());
  report.min_block_cost = blocks.front().cost;
  out.items.reserve(blocks.size());
  for (BlockType& block : blocks) {
    report.blocks.push_back(BlockSummary{
        block.source_type, block.multiplicity, block.cost,
        static_cast<std::int64_t>(block.tail.breakpoint_count())});
    report.min_block_cost = std::min(report.min_block_cost, block.cost);
    out.items.push_back(DpItem{block.cost, std::move(block.tail),
                               block.source_type, block.multiplicity});
  }

  FrontierResult result =
      build_frontier(out.items, norm.capacity, cfg, opts.dp_mode, &counter);
  report.value = result.value;
  report.frontier_len = result.steps;
  report.queries = counter;
  out.table = std::move(result.table);

  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                started)
          .count();
  return out;
}

}  // namespace

SolveReport solve(const Instance& inst, double epsilon,
                  const SolveOptions& opts) {
  return run_pipeline(inst, epsilon, opts).report;
}

PolicySolve solve_policy(const Instance& inst, double epsilon,
                         const SolveOptions& opts) {
  PipelineOutput out = run_pipeline(inst, epsilon, opts);
  if (out.report.degenerate) {
    // Constant policy: keep inserting the free type.
    FrontierTable table;
    table.f = {0, out.report.capacity};
    table.witness = {-1, 0};
    return PolicySolve{std::move(out.report),
                       BlockPolicy(std::move(table),
                                   {PolicyAction{out.zero_cost_type, 1}})};
  }
  BlockPolicy policy = extract_policy(out.table, out.items);
  return PolicySolve{std::move(out.report), std::move(policy)};
}

std::string report_to_json(const SolveReport& report, bool include_timing) {
  nlohmann::json doc;
  doc["value"] = report.value;
  doc["epsilon"] = report.epsilon;
  doc["T"] = report.T;
  doc["delta"] = report.delta;
  doc["theta"] = report.theta;
  doc["eta"] = report.eta;
  doc["zeta"] = report.zeta;
  doc["capacity"] = report.capacity;
  doc["num_types"] = report.num_types;
  doc["min_block_cost"] = report.min_block_cost;
  doc["frontier_len"] = report.frontier_len;
  doc["degenerate"] = report.degenerate;
  doc["queries"] = {{"cdf", report.queries.cdf},
                    {"tail", report.queries.tail},
                    {"total", report.queries.total()}};
  nlohmann::json blocks = nlohmann::json::array();
  for (const BlockSummary& b : report.blocks) {
    blocks.push_back({{"type", b.source_type},
                      {"multiplicity", b.multiplicity},
                      {"cost", b.cost},
                      {"breakpoints", b.breakpoints}});
  }
  doc["blocks"] = std::move(blocks);
  if (include_timing) {
    doc["wall_time_ms"] = report.wall_time_ms;
  }
  return doc.dump(2);
}

}  // namespace sumk
