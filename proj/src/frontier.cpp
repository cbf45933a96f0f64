#include "sumk/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sumk {

namespace {

constexpr std::size_t kSegmentPathMaxBreakpoints = 256;
constexpr std::int64_t kDenseAutoLimit = 4096;
constexpr std::int64_t kDenseHardLimit = std::int64_t{1} << 20;

std::int64_t iteration_cap(const DpConfig& cfg) {
  // The grid range is bounded by V-hat <= ~4(1+eps) T, so 8/delta units
  // always suffice; running past it means the parameterization is broken.
  return static_cast<std::int64_t>(std::ceil(8.0 / cfg.delta));
}

std::int64_t safe_ceil_i64(double x) {
  return static_cast<std::int64_t>(std::ceil(std::min(x, 4.0e18)));
}

// Does this item cover capacity w within i = |f| grid units? The budget test
// telescopes the (m+1)-weighted interval masses into
//   cost <= step * sum_m tail(w - f[m]),
// summing the same tail lookups the interval form would make.
bool item_covers(const DpItem& item, std::span<const std::int64_t> f,
                 std::int64_t w, double step, QueryCounter* counter) {
  const double threshold = item.cost / step;
  const auto i = static_cast<std::int64_t>(f.size());
  if (threshold > static_cast<double>(i)) return false;  // tails are <= 1 each

  const auto& pos = item.tail.positions();
  const auto& tails = item.tail.tails();
  const std::size_t K = pos.size();

  if (K <= kSegmentPathMaxBreakpoints) {
    // Per tail segment, count how many frontier entries land the residual
    // argument w - f[m] inside it. Arguments <= 0 carry tail 1 and fall into
    // the first segment.
    if (counter != nullptr) counter->tail += K;
    double sum = 0.0;
    std::int64_t prev_below = 0;
    for (std::size_t s = 1; s < K; ++s) {
      const std::int64_t below =
          i - (std::upper_bound(f.begin(), f.end(), w - pos[s]) - f.begin());
      sum += tails[s - 1] * static_cast<double>(below - prev_below);
      prev_below = below;
    }
    sum += tails[K - 1] * static_cast<double>(i - prev_below);
    return sum >= threshold;
  }

  // Wide arrays: scan frontier entries from the largest tail down, stopping
  // as soon as the budget is met or provably out of reach.
  double sum = 0.0;
  for (std::int64_t m = i; m-- > 0;) {
    const double t = item.tail.at(w - f[static_cast<std::size_t>(m)], counter);
    sum += t;
    if (sum >= threshold) return true;
    if (sum + static_cast<double>(m) * t < threshold) return false;
  }
  return sum >= threshold;
}

}  // namespace

DpConfig DpConfig::make(double epsilon, int num_types, double T) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (num_types < 1) {
    throw std::invalid_argument("DpConfig: need at least one type");
  }
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw std::invalid_argument("DpConfig: T must be positive");
  }
  DpConfig cfg;
  cfg.epsilon = epsilon;
  cfg.num_types = num_types;
  cfg.T = T;
  cfg.delta = epsilon * epsilon / (100.0 * num_types);
  cfg.theta = epsilon / (10.0 * num_types);
  return cfg;
}

Feasibility frontier_feasible(const std::vector<DpItem>& items,
                              std::span<const std::int64_t> frontier_prefix,
                              std::int64_t w, const DpConfig& cfg,
                              QueryCounter* counter) {
  const double step = cfg.grid_step();
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (item_covers(items[j], frontier_prefix, w, step, counter)) {
      return {true, static_cast<int>(j)};
    }
  }
  return {false, -1};
}

namespace {

FrontierResult run_frontier_mode(const std::vector<DpItem>& items,
                                 std::int64_t W, const DpConfig& cfg,
                                 QueryCounter* counter) {
  const std::int64_t cap = iteration_cap(cfg);
  FrontierTable table;
  table.f.push_back(0);
  table.witness.push_back(-1);
  for (std::int64_t i = 1; i <= cap; ++i) {
    const std::span<const std::int64_t> prefix(table.f.data(), table.f.size());
    std::int64_t lo = table.f.back();  // coverage only grows with the budget
    std::int64_t hi = W;
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (frontier_feasible(items, prefix, mid, cfg, counter).feasible) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    int witness = -1;
    if (lo >= 1) {
      witness = frontier_feasible(items, prefix, lo, cfg, counter).witness;
      if (witness < 0) witness = table.witness.back();
    }
    table.f.push_back(lo);
    table.witness.push_back(witness);
    if (lo >= W) {
      const double value = static_cast<double>(i) * cfg.grid_step();
      return FrontierResult{std::move(table), value, i};
    }
  }
  throw std::runtime_error(
      "build_frontier: iteration cap exceeded without covering the capacity; "
      "parameterization bug");
}

struct DenseItem {
  std::vector<std::int64_t> pos;
  std::vector<double> mass;
  double threshold = 0.0;  // cost in grid units
};

// Minimal number of grid units item needs to cover capacity w, given the
// grid levels of all smaller capacities. Piecewise-linear in the unit count,
// solved segment by segment over the distinct residual levels.
std::int64_t min_steps_for_item(const DenseItem& item,
                                const std::vector<std::int64_t>& level,
                                std::int64_t w, std::vector<std::int64_t>& lv,
                                std::vector<double>& ms,
                                QueryCounter* counter) {
  lv.clear();
  ms.clear();
  double uncovered = 0.0;
  const auto begin = item.pos.begin();
  auto t = static_cast<std::size_t>(
      std::lower_bound(begin, item.pos.end(), w) - begin);
  if (counter != nullptr) counter->tail += t;
  while (t-- > 0) {
    const std::int64_t l = level[static_cast<std::size_t>(w - item.pos[t])];
    if (!lv.empty() && lv.back() == l) {
      ms.back() += item.mass[t];
    } else {
      lv.push_back(l);
      ms.push_back(item.mass[t]);
    }
    uncovered += item.mass[t];
  }

  double covered_cost = 0.0;
  std::int64_t lower = 1;
  for (std::size_t q = 0; q <= lv.size(); ++q) {
    const std::int64_t seg_end =
        q < lv.size() ? lv[q] : std::numeric_limits<std::int64_t>::max();
    const double keep = 1.0 - uncovered;
    if (keep > 0.0) {
      const std::int64_t cand = std::max(
          lower, safe_ceil_i64((item.threshold + covered_cost) / keep));
      if (cand < seg_end) return cand;
    }
    if (q < lv.size()) {
      covered_cost += ms[q] * static_cast<double>(lv[q]);
      uncovered -= ms[q];
      lower = lv[q];
    }
  }
  throw std::logic_error("min_steps_for_item: no feasible unit count");
}

FrontierResult run_dense_mode(const std::vector<DpItem>& items, std::int64_t W,
                              const DpConfig& cfg, QueryCounter* counter) {
  const std::size_t n = items.size();
  std::vector<DenseItem> dense(n);
  for (std::size_t j = 0; j < n; ++j) {
    TailArray::Atoms atoms = items[j].tail.atoms();
    dense[j].pos = std::move(atoms.positions);
    dense[j].mass = std::move(atoms.masses);
    dense[j].threshold = items[j].cost / cfg.grid_step();
  }

  std::vector<std::int64_t> level(static_cast<std::size_t>(W) + 1, 0);
  std::vector<std::int64_t> lv;
  std::vector<double> ms;
  for (std::int64_t w = 1; w <= W; ++w) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t j = 0; j < n; ++j) {
      best = std::min(best, min_steps_for_item(dense[j], level, w, lv, ms, counter));
    }
    level[static_cast<std::size_t>(w)] =
        std::max(best, level[static_cast<std::size_t>(w - 1)]);
  }

  const std::int64_t steps = level[static_cast<std::size_t>(W)];
  if (steps > iteration_cap(cfg)) {
    throw std::runtime_error(
        "build_frontier: iteration cap exceeded without covering the capacity; "
        "parameterization bug");
  }

  FrontierTable table;
  table.f.assign(static_cast<std::size_t>(steps) + 1, 0);
  table.witness.assign(static_cast<std::size_t>(steps) + 1, -1);
  std::int64_t covered = 0;
  std::vector<std::int64_t> item_steps(n, 0);
  std::int64_t steps_at = -1;
  for (std::int64_t i = 1; i <= steps; ++i) {
    while (covered + 1 <= W && level[static_cast<std::size_t>(covered + 1)] <= i) {
      ++covered;
    }
    table.f[static_cast<std::size_t>(i)] = covered;
    if (covered >= 1) {
      if (steps_at != covered) {
        for (std::size_t j = 0; j < n; ++j) {
          item_steps[j] = min_steps_for_item(dense[j], level, covered, lv, ms, nullptr);
        }
        steps_at = covered;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (item_steps[j] <= i) {
          table.witness[static_cast<std::size_t>(i)] = static_cast<int>(j);
          break;
        }
      }
    }
  }
  return FrontierResult{std::move(table),
                        static_cast<double>(steps) * cfg.grid_step(), steps};
}

}  // namespace

FrontierResult build_frontier(const std::vector<DpItem>& items, std::int64_t W,
                              const DpConfig& cfg, DpMode mode,
                              QueryCounter* counter) {
  if (items.empty()) {
    throw std::invalid_argument("build_frontier: no items");
  }
  if (W < 1) {
    throw std::invalid_argument("build_frontier: capacity must be >= 1");
  }
  const double floor = cfg.expensive_floor();
  for (const DpItem& item : items) {
    if (item.cost < floor) {
      throw std::invalid_argument(
          "build_frontier: item cost " + std::to_string(item.cost) +
          " below the expensive floor " + std::to_string(floor) +
          "; bundle cheap types first");
    }
    if (item.tail.capacity() != W) {
      throw std::invalid_argument("build_frontier: item tail capacity mismatch");
    }
  }
  if (mode == DpMode::kAuto) {
    mode = W <= kDenseAutoLimit ? DpMode::kDense : DpMode::kFrontier;
  }
  if (mode == DpMode::kDense) {
    if (W > kDenseHardLimit) {
      throw std::invalid_argument("build_frontier: dense mode is limited to small capacities");
    }
    return run_dense_mode(items, W, cfg, counter);
  }
  return run_frontier_mode(items, W, cfg, counter);
}

BlockPolicy::BlockPolicy(FrontierTable table, std::vector<PolicyAction> actions)
    : table_(std::move(table)), actions_(std::move(actions)) {
  if (table_.f.empty() || table_.f.size() != table_.witness.size()) {
    throw std::invalid_argument("BlockPolicy: malformed frontier table");
  }
}

PolicyAction BlockPolicy::action(std::int64_t remaining) const {
  if (remaining < 1 || remaining > table_.f.back()) {
    throw std::out_of_range("BlockPolicy: residual capacity " +
                            std::to_string(remaining) + " outside [1, " +
                            std::to_string(table_.f.back()) + "]");
  }
  const auto it =
      std::lower_bound(table_.f.begin(), table_.f.end(), remaining);
  const auto idx = static_cast<std::size_t>(it - table_.f.begin());
  const int witness = table_.witness[idx];
  if (witness < 0) {
    throw std::logic_error("BlockPolicy: covering frontier entry has no witness");
  }
  return actions_[static_cast<std::size_t>(witness)];
}

BlockPolicy extract_policy(const FrontierTable& table,
                           const std::vector<DpItem>& items) {
  std::vector<PolicyAction> actions;
  actions.reserve(items.size());
  for (const DpItem& item : items) {
    actions.push_back(PolicyAction{item.source_type, item.multiplicity});
  }
  return BlockPolicy(table, std::move(actions));
}

}  // namespace sumk
