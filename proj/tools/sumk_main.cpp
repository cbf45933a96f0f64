// sumk: solver CLI for the stochastic unbounded min-knapsack problem.
//
// Subcommands: solve, exact, estimate, simulate, verify, gen, dist.
// All commands emit JSON by default (--format human for tables).
// Exit codes: 0 ok, 1 usage error, 2 instance error, 3 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumk/estimator.hpp"
#include "sumk/exact.hpp"
#include "sumk/generator.hpp"
#include "sumk/instance.hpp"
#include "sumk/simulate.hpp"
#include "sumk/solver.hpp"
#include "sumk/tail_array.hpp"

namespace {

using nlohmann::json;

std::int64_t exact_cap_from_env() {
  if (const char* env = std::getenv("SUMK_EXACT_CAP")) {
    return std::strtoll(env, nullptr, 10);
  }
  return sumk::kDefaultExactCap;
}

sumk::Instance load_normalized(const std::string& path) {
  std::vector<int> dropped;
  sumk::Instance inst =
      sumk::normalize_positive_support(sumk::load_instance(path), &dropped);
  for (const int idx : dropped) {
    std::cerr << "warning: type " << idx
              << " has all weight mass at zero; dropped\n";
  }
  return inst;
}

sumk::DpMode parse_mode(const std::string& name) {
  if (name == "auto") return sumk::DpMode::kAuto;
  if (name == "frontier") return sumk::DpMode::kFrontier;
  if (name == "dense") return sumk::DpMode::kDense;
  throw CLI::ValidationError("--dp-mode must be auto, frontier, or dense");
}

void emit(const json& doc, bool human) {
  if (human) {
    for (const auto& [key, value] : doc.items()) {
      std::cout << key << ": " << value.dump() << "\n";
    }
  } else {
    std::cout << doc.dump(2) << "\n";
  }
}

int cmd_solve(const std::string& path, double epsilon, const std::string& mode,
              bool timing, bool human) {
  const sumk::Instance inst = load_normalized(path);
  sumk::SolveOptions opts;
  opts.dp_mode = parse_mode(mode);
  const sumk::SolveReport report = sumk::solve(inst, epsilon, opts);
  if (human) {
    std::cout << "value:         " << report.value << "\n"
              << "epsilon:       " << report.epsilon << "\n"
              << "T:             " << report.T << "\n"
              << "delta/theta:   " << report.delta << " / " << report.theta << "\n"
              << "eta/zeta:      " << report.eta << " / " << report.zeta << "\n"
              << "frontier len:  " << report.frontier_len << "\n"
              << "queries:       " << report.queries.total() << " (cdf "
              << report.queries.cdf << ", tail " << report.queries.tail << ")\n"
              << "blocks:";
    for (const auto& b : report.blocks) {
      std::cout << " [type " << b.source_type << " x" << b.multiplicity
                << " cost " << b.cost << " bp " << b.breakpoints << "]";
    }
    std::cout << "\nwall time:     " << report.wall_time_ms << " ms\n";
  } else {
    std::cout << sumk::report_to_json(report, timing) << "\n";
  }
  return 0;
}

int cmd_exact(const std::string& path, bool dump_table, bool human) {
  const sumk::Instance inst = load_normalized(path);
  const sumk::ExactSolution sol = sumk::exact_solve(inst, exact_cap_from_env());
  json doc;
  doc["opt"] = sol.value();
  doc["capacity"] = sol.capacity;
  doc["num_types"] = static_cast<int>(inst.types.size());
  if (dump_table) {
    doc["opt_table"] = sol.opt;
    doc["best_type"] = sol.best_type;
  }
  emit(doc, human);
  return 0;
}

int cmd_estimate(const std::string& path, bool human) {
  const sumk::Instance inst = load_normalized(path);
  sumk::QueryCounter counter;
  const sumk::Estimate est = sumk::estimate_T(inst, &counter);
  json doc;
  doc["T"] = est.T;
  doc["best_ratio_type"] = est.best_ratio_type;
  doc["rounded_means"] = est.rounded_means;
  json ratios = json::array();
  for (std::size_t i = 0; i < inst.types.size(); ++i) {
    ratios.push_back(inst.types[i].cost / est.rounded_means[i]);
  }
  doc["ratios"] = std::move(ratios);
  doc["cdf_queries"] = counter.cdf;
  emit(doc, human);
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& policy_kind,
                 double epsilon, bool epsilon_given, std::int64_t trials,
                 std::uint64_t seed, bool human) {
  if (policy_kind == "fptas" && !epsilon_given) {
    throw CLI::ValidationError("simulate --policy fptas requires --epsilon");
  }
  const sumk::Instance inst = load_normalized(path);
  sumk::SimResult result;
  if (policy_kind == "exact") {
    const sumk::ExactSolution sol = sumk::exact_solve(inst, exact_cap_from_env());
    result = sumk::simulate(
        inst,
        [&sol](std::int64_t w) {
          return sumk::PolicyAction{sumk::exact_policy(sol, w), 1};
        },
        trials, seed);
  } else if (policy_kind == "fptas") {
    const sumk::PolicySolve ps = sumk::solve_policy(inst, epsilon);
    result = sumk::simulate(
        inst,
        [&ps](std::int64_t w) { return ps.policy.action(w); },
        trials, seed);
  } else {
    throw CLI::ValidationError("--policy must be exact or fptas");
  }
  json doc;
  doc["trials"] = result.trials;
  doc["mean_cost"] = result.mean_cost;
  doc["stderr"] = result.stderr_mean;
  doc["mean_items"] = result.mean_items;
  doc["seed"] = result.seed;
  doc["policy"] = policy_kind;
  emit(doc, human);
  return 0;
}

int cmd_verify(const std::vector<std::string>& paths, double epsilon,
               bool human) {
  const std::int64_t cap = exact_cap_from_env();
  json instances = json::array();
  int failed = 0;
  for (const std::string& path : paths) {
    const sumk::Instance inst = load_normalized(path);
    const sumk::ExactSolution sol = sumk::exact_solve(inst, cap);
    const sumk::SolveReport report = sumk::solve(inst, epsilon);
    const double opt = sol.value();
    const bool bracket_ok = (1.0 - epsilon) * opt <= report.value &&
                            report.value <= (1.0 + epsilon) * opt;
    const bool estimate_ok =
        report.degenerate || (opt / 4.0 <= report.T && report.T <= opt);
    const bool pass = bracket_ok && estimate_ok;
    if (!pass) ++failed;
    instances.push_back({{"path", path},
                         {"opt", opt},
                         {"vhat", report.value},
                         {"ratio", opt > 0.0 ? report.value / opt : 1.0},
                         {"T", report.T},
                         {"pass_bracket", bracket_ok},
                         {"pass_estimator", estimate_ok},
                         {"pass", pass}});
  }
  json doc;
  doc["epsilon"] = epsilon;
  doc["instances"] = std::move(instances);
  doc["total"] = paths.size();
  doc["failed"] = failed;
  doc["pass"] = failed == 0;
  emit(doc, human);
  return failed == 0 ? 0 : 3;
}

int cmd_gen(const sumk::GenSpec& spec, const std::string& out_path) {
  const sumk::Instance inst = sumk::generate_instance(spec);
  const std::string text = sumk::instance_to_json(inst);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw sumk::InstanceError("cannot write to " + out_path);
    out << text << "\n";
  }
  return 0;
}

int cmd_dist(const std::string& path, int type_index, double epsilon,
             bool rounded, bool human) {
  const sumk::Instance inst = load_normalized(path);
  if (type_index < 0 || type_index >= static_cast<int>(inst.types.size())) {
    throw sumk::InstanceError("type index out of range");
  }
  sumk::TailArray tail = sumk::TailArray::from_distribution(
      inst.types[static_cast<std::size_t>(type_index)].dist, inst.capacity);
  if (rounded) {
    tail = sumk::round_zeta_eta(
        tail, sumk::ApproxParams::from_epsilon(epsilon, inst.capacity));
  }
  json breakpoints = json::array();
  for (std::size_t i = 0; i < tail.breakpoint_count(); ++i) {
    breakpoints.push_back({tail.positions()[i], tail.tails()[i]});
  }
  json doc;
  doc["type"] = type_index;
  doc["rounded"] = rounded;
  doc["capacity"] = inst.capacity;
  doc["breakpoints"] = std::move(breakpoints);
  emit(doc, human);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic unbounded min-knapsack solver"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Output format: json or human")
      ->check(CLI::IsMember({"json", "human"}));

  std::string instance_path;
  std::vector<std::string> instance_paths;
  double epsilon = 0.2;
  std::string dp_mode = "auto";
  bool timing = false;
  bool dump_table = false;
  std::string policy_kind = "exact";
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  sumk::GenSpec gen_spec;
  std::string gen_out;
  int dist_type = 0;
  bool dist_rounded = false;

  auto* solve = app.add_subcommand("solve", "Run the approximation scheme");
  solve->add_option("instance", instance_path, "Instance JSON file")->required();
  solve->add_option("--epsilon", epsilon, "Approximation parameter in (0, 1)")->required();
  solve->add_option("--dp-mode", dp_mode, "DP mode: auto, frontier, dense");
  solve->add_flag("--timing", timing, "Include wall time in the JSON report");

  auto* exact = app.add_subcommand("exact", "Exact pseudo-polynomial solve");
  exact->add_option("instance", instance_path)->required();
  exact->add_flag("--table", dump_table, "Dump the full value table");

  auto* estimate = app.add_subcommand("estimate", "Constant-factor estimate T");
  estimate->add_option("instance", instance_path)->required();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
  simulate->add_option("instance", instance_path)->required();
  simulate->add_option("--policy", policy_kind, "exact or fptas")->required();
  simulate->add_option("--epsilon", epsilon, "Epsilon for the fptas policy");
  simulate->add_option("--trials", trials, "Number of trials");
  simulate->add_option("--seed", seed, "RNG seed");

  auto* verify = app.add_subcommand("verify", "Exact-vs-approximate check");
  verify->add_option("instances", instance_paths, "Instance JSON files")->required();
  verify->add_option("--epsilon", epsilon)->required();

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--num-types,-n", gen_spec.num_types)->required();
  gen->add_option("--capacity,-W", gen_spec.capacity)->required();
  gen->add_option("--max-support", gen_spec.max_support);
  gen->add_option("--cost-min", gen_spec.cost_min);
  gen->add_option("--cost-max", gen_spec.cost_max);
  gen->add_option("--seed", gen_spec.seed);
  gen->add_option("--output,-o", gen_out, "Write to a file instead of stdout");

  auto* dist = app.add_subcommand("dist", "Dump a type's tail array");
  dist->add_option("instance", instance_path)->required();
  dist->add_option("--type", dist_type, "Type index");
  dist->add_flag("--round", dist_rounded, "Apply geometric rounding");
  dist->add_option("--epsilon", epsilon, "Epsilon for the rounding parameters");

  try {
    app.parse(argc, argv);
    const bool human = format == "human";
    if (solve->parsed()) return cmd_solve(instance_path, epsilon, dp_mode, timing, human);
    if (exact->parsed()) return cmd_exact(instance_path, dump_table, human);
    if (estimate->parsed()) return cmd_estimate(instance_path, human);
    if (simulate->parsed())
      return cmd_simulate(instance_path, policy_kind, epsilon,
                          simulate->count("--epsilon") > 0, trials, seed, human);
    if (verify->parsed()) return cmd_verify(instance_paths, epsilon, human);
    if (gen->parsed()) return cmd_gen(gen_spec, gen_out);
    if (dist->parsed())
      return cmd_dist(instance_path, dist_type, epsilon, dist_rounded, human);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const sumk::InstanceError& e) {
    std::cerr << "instance error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
