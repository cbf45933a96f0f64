#include <cmath>

#include "doctest.h"
#include "sumk/estimator.hpp"
#include "sumk/exact.hpp"
#include "sumk/frontier.hpp"
#include "test_support.hpp"

using namespace sumk;

namespace {

// All-expensive corpus: with modest capacities and costs in [1, 10], every
// cost clears theta*T because theta*T <= (eps/10n) * W * min_cost.
Instance expensive_instance(std::uint64_t seed) {
  return testutil::corpus_instance(seed, 4, 40, 6, 1.0, 10.0);
}

std::vector<DpItem> exact_items(const Instance& in) {
  std::vector<DpItem> items;
  for (std::size_t j = 0; j < in.types.size(); ++j) {
    items.push_back(DpItem{in.types[j].cost,
                           TailArray::from_distribution(in.types[j].dist, in.capacity),
                           static_cast<int>(j), 1});
  }
  return items;
}

DpConfig config_for(const Instance& in, double epsilon) {
  return DpConfig::make(epsilon, static_cast<int>(in.types.size()),
                        estimate_T(in).T);
}

// Drives frontier_feasible with a hand-rolled binary search, so items below
// the expensive floor can be exercised too.
std::int64_t next_frontier(const std::vector<DpItem>& items,
                           const std::vector<std::int64_t>& f, std::int64_t W,
                           const DpConfig& cfg) {
  std::int64_t lo = f.back();
  std::int64_t hi = W;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (frontier_feasible(items, f, mid, cfg).feasible) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace

TEST_CASE("grid parameters follow the epsilon formulas") {
  const DpConfig cfg = DpConfig::make(0.3, 4, 2.0);
  CHECK(cfg.delta == doctest::Approx(0.3 * 0.3 / 400.0));
  CHECK(cfg.theta == doctest::Approx(0.3 / 40.0));
  CHECK(cfg.grid_step() == doctest::Approx(cfg.delta * 2.0));
  CHECK_THROWS_AS(DpConfig::make(0.0, 4, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(DpConfig::make(1.0, 4, 2.0), std::invalid_argument);
}

TEST_CASE("first frontier step at w=1 reduces to cost <= one grid unit") {
  const DpConfig cfg = DpConfig::make(0.5, 1, 100.0);
  const double step = cfg.grid_step();
  const TailArray tail =
      TailArray::from_distribution(testutil::dist({{1, 0.5}, {3, 0.5}}), 10);
  const std::vector<std::int64_t> f{0};

  const std::vector<DpItem> fits{DpItem{step * 0.999, tail, 0, 1}};
  CHECK(frontier_feasible(fits, f, 1, cfg).feasible);
  const std::vector<DpItem> exact_fit{DpItem{step, tail, 0, 1}};
  CHECK(frontier_feasible(exact_fit, f, 1, cfg).feasible);
  const std::vector<DpItem> too_dear{DpItem{step * 1.001, tail, 0, 1}};
  const Feasibility res = frontier_feasible(too_dear, f, 1, cfg);
  CHECK_FALSE(res.feasible);
  CHECK(res.witness == -1);
}

TEST_CASE("unit weights at cost delta*T advance the frontier one step at a time") {
  const DpConfig cfg = DpConfig::make(0.5, 1, 64.0);
  const std::int64_t W = 10;
  const std::vector<DpItem> items{
      DpItem{cfg.grid_step(), TailArray::from_distribution(testutil::dist({{1, 1.0}}), W), 0, 1}};
  std::vector<std::int64_t> f{0};
  for (std::int64_t i = 1; i <= W; ++i) {
    f.push_back(next_frontier(items, f, W, cfg));
    CHECK(f.back() == i);
  }
}

TEST_CASE("feasibility agrees with the literal interval-mass form") {
  for (std::uint64_t seed = 2100; seed < 2130; ++seed) {
    const Instance in = expensive_instance(seed);
    const DpConfig cfg = config_for(in, 0.3);
    const std::vector<DpItem> items = exact_items(in);
    std::vector<std::int64_t> f{0};
    TrialRng rng(seed, 11);
    for (int i = 1; i <= 60; ++i) {
      const std::int64_t next = next_frontier(items, f, in.capacity, cfg);
      // Probe the found frontier value and a few random capacities.
      for (int probe = 0; probe < 4; ++probe) {
        const std::int64_t w =
            probe == 0 ? std::max<std::int64_t>(next, 1)
                       : 1 + static_cast<std::int64_t>(
                                 rng.next_u64() %
                                 static_cast<std::uint64_t>(in.capacity));
        const Feasibility fast = frontier_feasible(items, f, w, cfg);
        const Feasibility literal = testutil::literal_feasible(items, f, w, cfg);
        CAPTURE(seed);
        CAPTURE(i);
        CAPTURE(w);
        CHECK(fast.feasible == literal.feasible);
        CHECK(fast.witness == literal.witness);
      }
      f.push_back(next);
      if (next >= in.capacity) break;
    }
  }
}

TEST_CASE("a single item costing T that always finishes") {
  const double T = 7.0;
  const DpConfig cfg = DpConfig::make(0.4, 1, T);
  const std::int64_t W = 10;
  const std::vector<DpItem> items{
      DpItem{T, TailArray::from_distribution(testutil::dist({{10, 1.0}}), W), 0, 1}};
  const FrontierResult res = build_frontier(items, W, cfg);
  const auto expected_steps =
      static_cast<std::int64_t>(std::ceil(1.0 / cfg.delta));
  CHECK(res.steps == expected_steps);
  CHECK(res.value == doctest::Approx(static_cast<double>(expected_steps) * cfg.grid_step()));
  CHECK(res.value >= T);
}

TEST_CASE("at W=1 the grid value covers the cheapest item") {
  const Instance in = testutil::inst(1, {{4.0, {{1, 1.0}}}, {3.0, {{1, 1.0}}}});
  const DpConfig cfg = config_for(in, 0.3);
  const FrontierResult res = build_frontier(exact_items(in), 1, cfg);
  const double step = cfg.grid_step();
  CHECK(res.value ==
        doctest::Approx(step * std::ceil(3.0 / step)).epsilon(1e-12));
}

TEST_CASE("doubling the capacity never lowers the grid value") {
  // T is a valid estimate for the largest capacity in the sweep so the same
  // grid serves all three runs.
  const double T = 10.0;
  const DpConfig cfg = DpConfig::make(0.4, 1, T);
  const auto value_at = [&](std::int64_t W) {
    const std::vector<DpItem> items{
        DpItem{1.0, TailArray::from_distribution(testutil::dist({{1, 0.5}, {2, 0.5}}), W), 0, 1}};
    return build_frontier(items, W, cfg).value;
  };
  CHECK(value_at(16) <= value_at(32));
  CHECK(value_at(32) <= value_at(64));
}

TEST_CASE("dense and binary-search modes build the same table") {
  for (std::uint64_t seed = 2200; seed < 2230; ++seed) {
    const Instance in = expensive_instance(seed);
    const DpConfig cfg = config_for(in, 0.25);
    const std::vector<DpItem> items = exact_items(in);
    const FrontierResult dense =
        build_frontier(items, in.capacity, cfg, DpMode::kDense);
    const FrontierResult frontier =
        build_frontier(items, in.capacity, cfg, DpMode::kFrontier);
    CHECK(dense.steps == frontier.steps);
    CHECK(dense.value == frontier.value);
    REQUIRE(dense.table.f.size() == frontier.table.f.size());
    CHECK(dense.table.f == frontier.table.f);
    CHECK(dense.table.witness == frontier.table.witness);
  }
}

TEST_CASE("frontier is monotone and the expensive bracket holds") {
  for (std::uint64_t seed = 2300; seed < 2350; ++seed) {
    const Instance in = expensive_instance(seed);
    const double eps = 0.2;
    const DpConfig cfg = config_for(in, eps);
    for (const ItemType& type : in.types) {
      REQUIRE(type.cost >= cfg.expensive_floor());
    }
    const FrontierResult res = build_frontier(exact_items(in), in.capacity, cfg);
    for (std::size_t i = 1; i < res.table.f.size(); ++i) {
      CHECK(res.table.f[i] >= res.table.f[i - 1]);
    }
    const double opt = exact_solve(in).value();
    CHECK(opt <= res.value);
    CHECK((1.0 - cfg.delta) * (1.0 - eps / 10.0) * res.value <= opt);
  }
}

TEST_CASE("frontier entries are sound and tight against the exact table") {
  for (std::uint64_t seed = 2400; seed < 2430; ++seed) {
    const Instance in = expensive_instance(seed);
    const DpConfig cfg = config_for(in, 0.25);
    const FrontierResult res = build_frontier(exact_items(in), in.capacity, cfg);
    const ExactSolution sol = exact_solve(in);
    const double step = cfg.grid_step();
    for (std::size_t i = 1; i < res.table.f.size(); ++i) {
      const std::int64_t fi = res.table.f[i];
      const double budget = static_cast<double>(i) * step;
      // Covered capacity really is coverable within the budget.
      CHECK(sol.opt_at(fi) <= budget + 1e-9 * (1.0 + budget));
      // And the next capacity is nearly out of reach.
      if (fi + 1 <= in.capacity) {
        const double slack =
            static_cast<double>(i) * cfg.delta * cfg.delta / cfg.theta * cfg.T;
        CHECK(sol.opt_at(fi + 1) > budget - slack - 1e-9 * (1.0 + budget));
      }
    }
  }
}

TEST_CASE("items below the expensive floor are rejected at DP entry") {
  const DpConfig cfg = DpConfig::make(0.2, 1, 100.0);
  const std::vector<DpItem> items{
      DpItem{cfg.expensive_floor() * 0.5,
             TailArray::from_distribution(testutil::dist({{1, 1.0}}), 10), 0, 1}};
  CHECK_THROWS_AS(build_frontier(items, 10, cfg), std::invalid_argument);
}

TEST_CASE("the iteration cap catches a broken parameterization") {
  // A lone item costing 10 T needs ~10/delta grid units, beyond the 8/delta cap.
  const DpConfig cfg = DpConfig::make(0.5, 1, 1.0);
  const std::vector<DpItem> items{
      DpItem{10.0, TailArray::from_distribution(testutil::dist({{10, 1.0}}), 10), 0, 1}};
  CHECK_THROWS_AS(build_frontier(items, 10, cfg, DpMode::kFrontier),
                  std::runtime_error);
  CHECK_THROWS_AS(build_frontier(items, 10, cfg, DpMode::kDense),
                  std::runtime_error);
}

TEST_CASE("policy returns the witness of the first covering entry") {
  for (std::uint64_t seed = 2500; seed < 2520; ++seed) {
    const Instance in = expensive_instance(seed);
    const DpConfig cfg = config_for(in, 0.3);
    const std::vector<DpItem> items = exact_items(in);
    const FrontierResult res = build_frontier(items, in.capacity, cfg);
    const BlockPolicy policy = extract_policy(res.table, items);
    for (std::int64_t w = 1; w <= in.capacity; ++w) {
      std::size_t i = 0;
      while (res.table.f[i] < w) ++i;
      const PolicyAction act = policy.action(w);
      CHECK(act.type == items[static_cast<std::size_t>(res.table.witness[i])].source_type);
      CHECK(act.count == 1);
    }
    CHECK_THROWS_AS(policy.action(0), std::out_of_range);
  }
}

TEST_CASE("single-item tables give a constant policy") {
  const Instance in = testutil::inst(12, {{2.0, {{2, 0.5}, {3, 0.5}}}});
  const DpConfig cfg = config_for(in, 0.3);
  const std::vector<DpItem> items = exact_items(in);
  const FrontierResult res = build_frontier(items, in.capacity, cfg);
  const BlockPolicy policy = extract_policy(res.table, items);
  for (std::int64_t w = 1; w <= 12; ++w) {
    CHECK(policy.action(w).type == 0);
  }
}

TEST_CASE("wide tail arrays take the scanning path and stay consistent") {
  // Hundreds of breakpoints push item_covers off the segment-counting path.
  const std::int64_t W = 2000;
  sumk::TrialRng rng(4500, 21);
  std::vector<std::pair<std::int64_t, double>> support;
  std::vector<double> raw;
  double sum = 0.0;
  for (std::int64_t v = 2; v <= 1200; v += 3) {
    raw.push_back(0.01 + rng.next_unit());
    sum += raw.back();
  }
  double assigned = 0.0;
  std::size_t idx = 0;
  for (std::int64_t v = 2; v <= 1200; v += 3, ++idx) {
    const double p = idx + 1 < raw.size() ? raw[idx] / sum : 1.0 - assigned;
    support.emplace_back(v, p);
    assigned += p;
  }
  const Instance in = sumk::make_instance(
      W, {ItemType{50.0, WeightDistribution(std::move(support))},
          ItemType{30.0, testutil::dist({{100, 0.5}, {900, 0.5}})}});

  const DpConfig cfg = config_for(in, 0.3);
  const std::vector<DpItem> items = exact_items(in);
  REQUIRE(items[0].tail.breakpoint_count() > 256);

  std::vector<std::int64_t> f{0};
  TrialRng probe(4501, 2);
  for (int i = 1; i <= 50; ++i) {
    const std::int64_t next = next_frontier(items, f, W, cfg);
    for (int k = 0; k < 3; ++k) {
      const std::int64_t w =
          1 + static_cast<std::int64_t>(probe.next_u64() %
                                        static_cast<std::uint64_t>(W));
      const Feasibility fast = frontier_feasible(items, f, w, cfg);
      const Feasibility literal = testutil::literal_feasible(items, f, w, cfg);
      CHECK(fast.feasible == literal.feasible);
      CHECK(fast.witness == literal.witness);
    }
    f.push_back(next);
    if (next >= W) break;
  }

  const FrontierResult dense = build_frontier(items, W, cfg, DpMode::kDense);
  const FrontierResult frontier =
      build_frontier(items, W, cfg, DpMode::kFrontier);
  CHECK(dense.value == frontier.value);
  CHECK(dense.table.f == frontier.table.f);
}

TEST_CASE("feasibility query count stays linear in the prefix length") {
  const Instance in = expensive_instance(2600);
  const DpConfig cfg = config_for(in, 0.25);
  const std::vector<DpItem> items = exact_items(in);
  std::vector<std::int64_t> f{0};
  for (int i = 1; i <= 40; ++i) {
    f.push_back(next_frontier(items, f, in.capacity, cfg));
  }
  QueryCounter counter;
  frontier_feasible(items, f, std::max<std::int64_t>(f.back(), 1), cfg, &counter);
  std::uint64_t bound = 0;
  for (const DpItem& item : items) {
    bound += std::max<std::uint64_t>(item.tail.breakpoint_count(), f.size());
  }
  CHECK(counter.tail <= bound);
}
