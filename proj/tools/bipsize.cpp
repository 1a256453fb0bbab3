// Command-line front end: every subcommand except `gen` is a thin layer that
// turns flags into config keys and runs an experiment pipeline.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bipsize/generators.hpp"
#include "bipsize/harness.hpp"

namespace {

using bipsize::KeyValueConfig;

constexpr int kPass = 0;
constexpr int kAssertFail = 1;
constexpr int kUsage = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::vector<std::string> sets;
  // Graph flags.
  std::string model;
  std::optional<std::size_t> n1, n2, trials;
  std::optional<double> p;
  std::string graph_file;
};

void add_common(CLI::App* cmd, Common& c, bool graph_flags = true) {
  cmd->add_option("--seed", c.seed, "Root seed");
  cmd->add_option("--config", c.config, "Flat key=value config file");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--set", c.sets, "Extra key=value override (repeatable)");
  if (!graph_flags) return;
  cmd->add_option("--model", c.model, "uniform | complete | edgeless | complement-of | file");
  cmd->add_option("--n1", c.n1, "Size of V1");
  cmd->add_option("--n2", c.n2, "Size of V2 (defaults to n1)");
  cmd->add_option("-p,--p", c.p, "Edge probability for the uniform model");
  cmd->add_option("--graph", c.graph_file, "Edge-list file (sets model=file)");
  cmd->add_option("--trials", c.trials, "Number of trials; trial t uses seed + t");
}

template <class T>
std::string text(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return bipsize::format_double(v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else {
    return std::to_string(v);
  }
}

// Config file first, then flags.
KeyValueConfig base_config(const Common& c) {
  KeyValueConfig kv = c.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(c.config);
  if (c.seed) kv.set("seed", text(*c.seed));
  if (!c.out.empty()) kv.set("out", c.out);
  if (!c.model.empty()) kv.set("model", c.model);
  if (c.n1) kv.set("n1", text(*c.n1));
  if (c.n2) kv.set("n2", text(*c.n2));
  if (c.p) kv.set("p", text(*c.p));
  if (c.trials) kv.set("trials", text(*c.trials));
  if (!c.graph_file.empty()) {
    kv.set("model", "file");
    kv.set("path", c.graph_file);
  }
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw bipsize::ConfigError("--set expects key=value, got '" + s + "'");
    kv.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return kv;
}

int run_pipeline(KeyValueConfig kv, const std::string& pipeline) {
  if (!pipeline.empty()) kv.set("pipeline", pipeline);
  const auto cfg = bipsize::ExperimentConfig::from(kv);
  const auto report = bipsize::run_experiment(cfg);
  const auto paths = bipsize::write_report(cfg, report);
  std::cout << bipsize::pipeline_name(cfg.pipeline) << ": " << report.rows.size() << " rows, "
            << report.failures.size() << " failures\n";
  for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
  for (const auto& f : report.failures) std::cerr << "FAIL " << f << '\n';
  return report.passed() ? kPass : kAssertFail;
}

template <class T>
void put(KeyValueConfig& kv, const char* key, const std::optional<T>& v) {
  if (v) kv.set(key, text(*v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induced bipartite subgraphs of every size: checks, extraction, solving and experiments"};
  app.require_subcommand(1);

  Common gen_c, check_c, extract_c, solve_c, sweep_c, oracle_c, anti_c, exp_c;

  auto* gen = app.add_subcommand("gen", "Generate a graph and write it as an edge list");
  add_common(gen, gen_c);

  auto* check = app.add_subcommand("check", "Evaluate the graph predicates");
  add_common(check, check_c);
  std::optional<double> check_C;
  std::string check_expect;
  check->add_option("--C", check_C, "Ramsey constant");
  check->add_option("--expect", check_expect, "Assert the Ramsey verdict (ramsey | not-ramsey | unknown)");

  auto* extract = app.add_subcommand("extract", "Extract a disjoint family of pair structures");
  add_common(extract, extract_c);
  std::optional<double> ex_eps;
  std::optional<std::size_t> ex_size, ex_family, ex_min;
  std::string ex_side;
  extract->add_option("--eps", ex_eps, "Diversity fraction");
  extract->add_option("--size", ex_size, "Leaves or pairs per structure");
  extract->add_option("--family", ex_family, "Structures per family");
  extract->add_option("--side", ex_side, "V1 or V2");
  extract->add_option("--min-success", ex_min, "Assert at least this many full families");

  auto* solve = app.add_subcommand("solve", "Find an induced subgraph with exactly m edges");
  add_common(solve, solve_c);
  std::optional<std::size_t> target;
  solve->add_option("-m,--target", target, "Edge count")->required();

  auto* sweep = app.add_subcommand("sweep", "Solve every m in a range");
  add_common(sweep, sweep_c);
  std::optional<std::size_t> lo, hi, min_trials;
  std::optional<double> coverage;
  sweep->add_option("--lo", lo, "First edge count");
  sweep->add_option("--hi", hi, "Last edge count (default n1*n2/4)");
  sweep->add_option("--expect-coverage", coverage, "Assert this coverage fraction per trial");
  sweep->add_option("--min-trials", min_trials, "Trials that must reach the coverage");

  auto* oracle = app.add_subcommand("oracle", "Compare the solver with exhaustive enumeration");
  add_common(oracle, oracle_c);
  std::optional<std::size_t> budget;
  std::string p_list;
  oracle->add_option("--budget", budget, "Largest class size enumerated");
  oracle->add_option("--p-list", p_list, "Comma-separated densities cycled over trials");

  auto* anticonc = app.add_subcommand("anticonc", "Anti-concentration sweeps");
  add_common(anticonc, anti_c);
  std::string engines;
  std::optional<std::size_t> n_lo, n_hi;
  anticonc->add_option("--engines", engines, "Comma-separated: mod, point, collision");
  anticonc->add_option("--n-lo", n_lo, "First n for the modular law");
  anticonc->add_option("--n-hi", n_hi, "Last n for the modular law");

  auto* experiment = app.add_subcommand("experiment", "Run the pipeline named in a config file");
  add_common(experiment, exp_c, false);
  experiment->get_option("--config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (gen->parsed()) {
      auto kv = base_config(gen_c);
      const auto cfg = bipsize::ExperimentConfig::from(kv);
      const auto g = bipsize::generate(cfg.graph);
      if (gen_c.out.empty() && !kv.has("out")) {
        bipsize::write_edge_list(std::cout, g);
      } else {
        std::filesystem::create_directories(cfg.out_dir);
        const auto path = cfg.out_dir / "graph.txt";
        bipsize::save_edge_list(path.string(), g);
        std::cout << "wrote " << path.string() << '\n';
      }
      return kPass;
    }
    if (check->parsed()) {
      auto kv = base_config(check_c);
      put(kv, "check.C", check_C);
      if (!check_expect.empty()) kv.set("expect.ramsey", check_expect);
      return run_pipeline(kv, "check");
    }
    if (extract->parsed()) {
      auto kv = base_config(extract_c);
      put(kv, "extract.eps", ex_eps);
      put(kv, "extract.size", ex_size);
      put(kv, "extract.family", ex_family);
      put(kv, "expect.min_success", ex_min);
      if (!ex_side.empty()) kv.set("extract.side", ex_side);
      return run_pipeline(kv, "extract");
    }
    if (solve->parsed()) {
      auto kv = base_config(solve_c);
      put(kv, "sweep.lo", target);
      put(kv, "sweep.hi", target);
      kv.set("expect.coverage", "1");
      return run_pipeline(kv, "solve-sweep");
    }
    if (sweep->parsed()) {
      auto kv = base_config(sweep_c);
      put(kv, "sweep.lo", lo);
      put(kv, "sweep.hi", hi);
      put(kv, "expect.coverage", coverage);
      put(kv, "expect.min_trials", min_trials);
      return run_pipeline(kv, "solve-sweep");
    }
    if (oracle->parsed()) {
      auto kv = base_config(oracle_c);
      put(kv, "oracle.budget", budget);
      if (!p_list.empty()) kv.set("oracle.p_list", p_list);
      return run_pipeline(kv, "oracle-compare");
    }
    if (anticonc->parsed()) {
      auto kv = base_config(anti_c);
      if (!engines.empty()) kv.set("anticonc.engines", engines);
      put(kv, "anticonc.n_lo", n_lo);
      put(kv, "anticonc.n_hi", n_hi);
      return run_pipeline(kv, "anticoncentration-sweep");
    }
    if (experiment->parsed()) {
      auto kv = base_config(exp_c);
      return run_pipeline(kv, "");
    }
  } catch (const bipsize::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const bipsize::MalformedInput& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAssertFail;
  }
  return kUsage;
}
