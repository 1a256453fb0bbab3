#include "bipsize/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "bipsize/anticoncentration.hpp"
#include "bipsize/ramsey_metrics.hpp"
#include "bipsize/rng.hpp"
#include "bipsize/structures.hpp"

namespace bipsize {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("key '" + key + "': cannot parse '" + text + "'");
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  std::stringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(number) + ": empty key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const std::string* KeyValueConfig::lookup(const std::string& key) const {
  read_.insert(key);
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto* v = lookup(key);
  return v ? *v : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto* v = lookup(key);
  return v ? parse_number<std::int64_t>(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto* v = lookup(key);
  return v ? parse_number<std::uint64_t>(key, *v) : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto* v = lookup(key);
  return v ? parse_number<double>(key, *v) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<std::int64_t> KeyValueConfig::get_int_list(const std::string& key,
                                                       const std::vector<std::int64_t>& fallback) const {
  const auto* v = lookup(key);
  if (!v) return fallback;
  std::vector<std::int64_t> out;
  for (const auto& item : split_commas(*v)) out.push_back(parse_number<std::int64_t>(key, item));
  return out;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto* v = lookup(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split_commas(*v)) out.push_back(parse_number<double>(key, item));
  return out;
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key,
                                                  const std::vector<std::string>& fallback) const {
  const auto* v = lookup(key);
  return v ? split_commas(*v) : fallback;
}

std::vector<std::string> KeyValueConfig::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (!read_.count(k)) out.push_back(k);
  }
  return out;
}

Pipeline parse_pipeline(const std::string& name) {
  if (name == "check") return Pipeline::Check;
  if (name == "extract") return Pipeline::Extract;
  if (name == "solve-sweep") return Pipeline::SolveSweep;
  if (name == "oracle-compare") return Pipeline::OracleCompare;
  if (name == "anticoncentration-sweep" || name == "anticonc") return Pipeline::Anticoncentration;
  throw ConfigError("unknown pipeline '" + name + "'");
}

const char* pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::Check:
      return "check";
    case Pipeline::Extract:
      return "extract";
    case Pipeline::SolveSweep:
      return "solve-sweep";
    case Pipeline::OracleCompare:
      return "oracle-compare";
    case Pipeline::Anticoncentration:
      return "anticoncentration-sweep";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv) {
  ExperimentConfig c;
  c.pipeline = parse_pipeline(kv.get_string("pipeline", "check"));
  const std::string rng = kv.get_string("rng", std::string(kRngAlgorithm));
  if (rng != kRngAlgorithm) {
    throw ConfigError("rng '" + rng + "' is not available; this build provides " + std::string(kRngAlgorithm));
  }
  c.graph.model = parse_model(kv.get_string("model", "uniform"));
  c.graph.n1 = static_cast<std::size_t>(kv.get_uint("n1", 64));
  c.graph.n2 = static_cast<std::size_t>(kv.get_uint("n2", c.graph.n1));
  c.graph.p = kv.get_double("p", 0.5);
  c.graph.seed = kv.get_uint("seed", 0);
  c.graph.base = kv.get_string("base", "uniform");
  c.graph.path = kv.get_string("path", "");
  c.trials = static_cast<std::size_t>(kv.get_uint("trials", 1));
  c.threads = std::max<std::size_t>(1, static_cast<std::size_t>(kv.get_uint("threads", 1)));
  c.out_dir = kv.get_string("out", "out");
  c.write_json = false;
  for (const auto& f : kv.get_list("formats", {"csv", "json"})) {
    if (f == "json") {
      c.write_json = true;
    } else if (f != "csv") {
      throw ConfigError("unknown report format '" + f + "'");
    }
  }

  SolverConfig& s = c.solver;
  s.C = kv.get_double("solver.C", s.C);
  s.eps = kv.get_double("solver.eps", s.eps);
  s.delta = kv.get_double("solver.delta", s.delta);
  s.d0 = kv.get_int("solver.d0", s.d0);
  s.L = kv.get_uint("solver.L", s.L);
  s.C0 = kv.get_double("solver.C0", s.C0);
  s.c = kv.get_double("solver.c", s.c);
  s.frac_u1 = kv.get_double("solver.frac_u1", s.frac_u1);
  s.frac_u2 = kv.get_double("solver.frac_u2", s.frac_u2);
  s.frac_u3 = kv.get_double("solver.frac_u3", s.frac_u3);
  s.structure_size = kv.get_uint("solver.structure_size", s.structure_size);
  s.family_size = kv.get_uint("solver.family_size", s.family_size);
  s.min_private = kv.get_uint("solver.min_private", s.min_private);
  s.w_attempts = kv.get_uint("solver.w_attempts", s.w_attempts);
  s.residue_retries = kv.get_uint("solver.residue_retries", s.residue_retries);
  s.anchor_rest = kv.get_bool("solver.anchor_rest", s.anchor_rest);
  s.bridge_unused = kv.get_bool("solver.bridge_unused", s.bridge_unused);
  s.bridge_typical_only = kv.get_bool("solver.bridge_typical_only", s.bridge_typical_only);
  s.fallback_budget = kv.get_uint("solver.fallback_budget", s.fallback_budget);
  s.ladder_ratio = kv.get_double("solver.ladder_ratio", s.ladder_ratio);
  s.cell_attempts = kv.get_uint("solver.cell_attempts", s.cell_attempts);
  s.eager_witnesses = kv.get_bool("solver.eager_witnesses", s.eager_witnesses);
  if (kv.has("solver.seed")) c.solver_seed = kv.get_uint("solver.seed", 0);
  s.validate();

  c.params = kv;
  return c;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const auto& c = cells[i];
    if (c.find_first_of(",\"\n\r") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string params_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 15];
  return out;
}

namespace {

struct TrialOut {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> failures;
  std::vector<nlohmann::json> records;
  nlohmann::json summary;
};

template <class F>
std::vector<TrialOut> run_trials(std::size_t count, std::size_t threads, F&& fn) {
  std::vector<TrialOut> outs(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < count; t = next++) {
      try {
        outs[t] = fn(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(threads, count);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return outs;
}

std::string str(std::size_t x) { return std::to_string(x); }

GeneratorSpec trial_graph(const ExperimentConfig& c, std::size_t t) {
  GeneratorSpec s = c.graph;
  s.seed = c.graph.seed + t;
  return s;
}

SolverConfig trial_solver(const ExperimentConfig& c, std::uint64_t graph_seed) {
  SolverConfig s = c.solver;
  s.seed = c.solver_seed ? *c.solver_seed : graph_seed;
  return s;
}

void require_all_read(const KeyValueConfig& kv) {
  const auto unused = kv.unused();
  if (unused.empty()) return;
  std::string names;
  for (const auto& k : unused) names += (names.empty() ? "" : ", ") + k;
  throw ConfigError("unknown config key(s): " + names);
}

// --- check -----------------------------------------------------------------

ExperimentReport run_check(const ExperimentConfig& c, const KeyValueConfig& kv) {
  RamseyParams rp;
  rp.C = kv.get_double("check.C", 2.0);
  RamseySearchOptions ro;
  ro.node_budget = kv.get_uint("check.node_budget", ro.node_budget);
  const double delta = kv.get_double("check.delta", 0.25);
  const double eps = kv.get_double("check.eps", 0.05);
  const double close_c = kv.get_double("check.c", 0.25);
  const double alpha = kv.get_double("check.alpha", 0.25);
  const std::size_t richness_trials = kv.get_uint("check.richness_trials", 200);
  const auto predicates =
      kv.get_list("check.predicates", {"ramsey", "density", "typical", "richness", "diversity", "pair-diversity"});
  const std::string expect_ramsey = kv.get_string("expect.ramsey", "");
  require_all_read(kv);
  for (const auto& p : predicates) {
    static const std::vector<std::string> known = {"ramsey",  "density",   "typical",
                                                   "richness", "diversity", "pair-diversity"};
    if (std::find(known.begin(), known.end(), p) == known.end()) throw ConfigError("unknown predicate '" + p + "'");
  }
  auto wants = [&](const char* p) { return std::find(predicates.begin(), predicates.end(), p) != predicates.end(); };

  auto outs = run_trials(c.trials, c.threads, [&](std::size_t t) {
    TrialOut out;
    const auto spec = trial_graph(c, t);
    const BipartiteGraph g = generate(spec);
    auto emit = [&](const std::string& predicate, const std::string& params, const std::string& verdict,
                    const nlohmann::json& witness) {
      const std::string w = witness.is_null() ? "" : witness.dump();
      out.rows.push_back({str(t), std::to_string(spec.seed), predicate, params, verdict, w});
      out.records.push_back({{"trial", t},
                             {"seed", spec.seed},
                             {"predicate", predicate},
                             {"parameters", params},
                             {"verdict", verdict},
                             {"witness", witness}});
    };

    if (wants("ramsey")) {
      const auto r = is_c_ramsey(g, rp, ro);
      nlohmann::json w;
      if (r.witness) {
        w = {{"a", r.witness->a.indices()}, {"b", r.witness->b.indices()}, {"complete", r.witness->complete}};
      }
      const std::string verdict = verdict_name(r.verdict);
      emit("c-ramsey", "C=" + format_double(rp.C) + ";t1=" + str(r.t1) + ";t2=" + str(r.t2), verdict, w);
      if (!expect_ramsey.empty() && verdict != expect_ramsey) {
        out.failures.push_back("trial " + str(t) + ": expected " + expect_ramsey + ", got " + verdict);
      }
    }
    if (wants("density")) {
      emit("density", "C=" + format_double(rp.C), density_in_bounds(g, rp) ? "in-bounds" : "out-of-bounds",
           g.density());
    }
    if (wants("typical")) {
      for (Side side : {Side::V1, Side::V2}) {
        const auto typical = degree_typical_vertices(g, side, rp);
        const auto atypical = typical.complement();
        emit(std::string("degree-typical-") + side_name(side), "C=" + format_double(rp.C),
             str(typical.count()) + "/" + str(g.size(side)), atypical.indices());
      }
    }
    if (wants("richness")) {
      RichnessOptions opts;
      opts.trials = richness_trials;
      opts.seed = derive_seed(spec.seed, 1);
      const auto r = check_richness(g, delta, eps, opts);
      nlohmann::json w;
      if (r.violation) {
        w = {{"side_of_w", side_name(r.violation->side_of_w)},
             {"w", r.violation->w.indices()},
             {"deficient", r.violation->deficient.indices()}};
      }
      const std::string verdict = r.violation ? "violated" : (r.proven ? "proven" : "no-violation-found");
      emit("richness", "delta=" + format_double(delta) + ";eps=" + format_double(eps), verdict, w);
    }
    if (wants("diversity")) {
      for (Side side : {Side::V1, Side::V2}) {
        const auto v = diversity_violations(g, side, close_c);
        nlohmann::json w;
        if (!v.empty()) w = {{"vertex", v.front().vertex}, {"close_count", v.front().close_count}};
        emit(std::string("diversity-") + side_name(side), "c=" + format_double(close_c),
             v.empty() ? "ok" : "violated:" + str(v.size()), w);
      }
    }
    if (wants("pair-diversity")) {
      for (Side side : {Side::V1, Side::V2}) {
        PairDiversityOptions opts;
        opts.seed = derive_seed(spec.seed, 2);
        const auto v = pair_diversity_violations(g, side, close_c, alpha, opts);
        nlohmann::json w;
        if (!v.empty()) w = {{"u", v.front().pair.u}, {"v", v.front().pair.v}, {"packing", v.front().packing}};
        emit(std::string("pair-diversity-") + side_name(side),
             "c=" + format_double(close_c) + ";alpha=" + format_double(alpha),
             v.empty() ? "ok" : "violated:" + str(v.size()), w);
      }
    }
    return out;
  });

  ExperimentReport rep;
  rep.header = {"trial", "seed", "predicate", "parameters", "verdict", "witness"};
  for (auto& o : outs) {
    for (auto& r : o.rows) rep.rows.push_back(std::move(r));
    for (auto& f : o.failures) rep.failures.push_back(std::move(f));
    for (auto& r : o.records) rep.records.push_back(std::move(r));
  }
  return rep;
}

// --- extract ---------------------------------------------------------------

ExperimentReport run_extract(const ExperimentConfig& c, const KeyValueConfig& kv) {
  const Side side = parse_side(kv.get_string("extract.side", "V1"));
  const double eps = kv.get_double("extract.eps", 0.01);
  ExtractOptions opts;
  if (kv.has("extract.eps0")) opts.eps0 = kv.get_double("extract.eps0", eps);
  const std::size_t size = kv.get_uint("extract.size", 8);
  const std::size_t family = kv.get_uint("extract.family", 4);
  const std::size_t min_success = kv.get_uint("expect.min_success", 0);
  require_all_read(kv);

  auto outs = run_trials(c.trials, c.threads, [&](std::size_t t) {
    TrialOut out;
    const auto spec = trial_graph(c, t);
    const BipartiteGraph g = generate(spec);
    std::vector<PairStructure> found;
    bool success = true;
    const VertexSet none(g.size(side));
    try {
      found = extract_disjoint_family(g, side, eps, size, family, none, derive_seed(spec.seed, 3), opts);
    } catch (const FamilyExtractionFailure& e) {
      success = false;
      found = e.partial();
    }
    std::size_t invalid = 0;
    std::string kinds;
    for (std::size_t i = 0; i < found.size(); ++i) {
      const auto bad = structure_violations(g, found[i]);
      if (!bad.empty()) {
        ++invalid;
        out.failures.push_back("trial " + str(t) + " structure " + str(i) + ": " + bad.front());
      }
      kinds += (kinds.empty() ? "" : ";") + std::string(found[i].kind()) + ":" + str(found[i].size());
      auto j = to_json(found[i]);
      j["trial"] = t;
      j["index"] = i;
      j["verified"] = bad.empty();
      out.records.push_back(std::move(j));
    }
    out.rows.push_back({str(t), std::to_string(spec.seed), str(found.size()), str(family), success ? "yes" : "no",
                        str(invalid), kinds});
    out.summary = success;
    return out;
  });

  ExperimentReport rep;
  rep.header = {"trial", "seed", "structures", "family_size", "success", "invalid", "kinds"};
  std::size_t successes = 0;
  for (auto& o : outs) {
    for (auto& r : o.rows) rep.rows.push_back(std::move(r));
    for (auto& f : o.failures) rep.failures.push_back(std::move(f));
    for (auto& r : o.records) rep.records.push_back(std::move(r));
    successes += o.summary.get<bool>() ? 1 : 0;
  }
  rep.summary["successes"] = successes;
  if (successes < min_success) {
    rep.failures.push_back("only " + str(successes) + " of " + str(c.trials) + " trials extracted a full family; " +
                           str(min_success) + " required");
  }
  return rep;
}

// --- solve-sweep -----------------------------------------------------------

ExperimentReport run_solve_sweep(const ExperimentConfig& c, const KeyValueConfig& kv) {
  const std::size_t default_hi = c.graph.n1 * c.graph.n2 / 4;
  const std::size_t lo = kv.get_uint("sweep.lo", 0);
  const std::size_t hi = kv.get_uint("sweep.hi", default_hi);
  const bool keep_witnesses = kv.get_bool("sweep.witnesses", true);
  const double expect_coverage = kv.get_double("expect.coverage", 0.0);
  const std::size_t min_trials = kv.get_uint("expect.min_trials", c.trials);
  require_all_read(kv);
  if (lo > hi) throw ConfigError("sweep.lo exceeds sweep.hi");

  auto outs = run_trials(c.trials, c.threads, [&](std::size_t t) {
    TrialOut out;
    const auto spec = trial_graph(c, t);
    const BipartiteGraph g = generate(spec);
    SizeSolver solver(g, trial_solver(c, spec.seed));
    std::size_t solved = 0, verified = 0;
    std::optional<std::size_t> first_miss;
    for (std::size_t m = lo; m <= hi; ++m) {
      auto w = solver.try_solve(m);
      if (!w) {
        if (!first_miss) first_miss = m;
        continue;
      }
      ++solved;
      const bool ok = verify_witness(g, *w) && w->edge_count == m;
      if (ok) {
        ++verified;
      } else {
        out.failures.push_back("trial " + str(t) + ": witness for " + str(m) + " fails recount");
      }
      if (keep_witnesses) {
        auto j = to_json(*w, m);
        j["trial"] = t;
        out.records.push_back(std::move(j));
      }
    }
    const std::size_t total = hi - lo + 1;
    const double coverage = static_cast<double>(verified) / static_cast<double>(total);
    out.rows.push_back({str(t), std::to_string(spec.seed), str(lo), str(hi), str(solved), str(total - solved),
                        format_double(coverage), str(verified), first_miss ? str(*first_miss) : "",
                        str(solver.cells_built()), str(solver.cells_failed())});
    out.summary = coverage;
    return out;
  });

  ExperimentReport rep;
  rep.header = {"trial",    "seed",       "lo",         "hi",          "solved",      "missed",
                "coverage", "verified",   "first_miss", "cells_built", "cells_failed"};
  std::size_t meeting = 0;
  for (auto& o : outs) {
    for (auto& r : o.rows) rep.rows.push_back(std::move(r));
    for (auto& f : o.failures) rep.failures.push_back(std::move(f));
    for (auto& r : o.records) rep.records.push_back(std::move(r));
    if (o.summary.get<double>() >= expect_coverage) ++meeting;
  }
  rep.summary["trials_meeting_coverage"] = meeting;
  if (expect_coverage > 0 && meeting < min_trials) {
    rep.failures.push_back(str(meeting) + " of " + str(c.trials) + " trials reached coverage " +
                           format_double(expect_coverage) + "; " + str(min_trials) + " required");
  }
  return rep;
}

// --- oracle-compare --------------------------------------------------------

ExperimentReport run_oracle_compare(const ExperimentConfig& c, const KeyValueConfig& kv) {
  const std::size_t budget = kv.get_uint("oracle.budget", 20);
  const auto p_list = kv.get_double_list("oracle.p_list", {c.graph.p});
  require_all_read(kv);
  if (p_list.empty()) throw ConfigError("oracle.p_list is empty");

  auto outs = run_trials(c.trials, c.threads, [&](std::size_t t) {
    TrialOut out;
    auto spec = trial_graph(c, t);
    spec.p = p_list[t % p_list.size()];
    const BipartiteGraph g = generate(spec);
    const auto oracle = achievable_sizes_oracle(g, budget);
    SizeSolver solver(g, trial_solver(c, spec.seed));
    std::vector<std::size_t> solved;
    std::size_t false_successes = 0;
    for (std::size_t m = 0; m <= g.n1() * g.n2(); ++m) {
      auto w = solver.try_solve(m);
      if (!w) continue;
      solved.push_back(m);
      if (!verify_witness(g, *w) || w->edge_count != m || !std::binary_search(oracle.begin(), oracle.end(), m)) {
        ++false_successes;
      }
    }
    std::size_t misses = 0;
    for (auto m : oracle) {
      if (!std::binary_search(solved.begin(), solved.end(), m)) ++misses;
    }
    const bool agree = false_successes == 0 && misses == 0;
    if (!agree) {
      out.failures.push_back("trial " + str(t) + ": " + str(false_successes) + " false successes, " + str(misses) +
                             " misses");
    }
    out.rows.push_back({str(t), std::to_string(spec.seed), format_double(spec.p), str(oracle.size()),
                        str(solved.size()), str(false_successes), str(misses), agree ? "agree" : "disagree"});
    out.records.push_back({{"trial", t}, {"seed", spec.seed}, {"oracle", oracle}, {"solver", solved}});
    return out;
  });

  ExperimentReport rep;
  rep.header = {"trial", "seed", "p", "oracle_sizes", "solver_sizes", "false_successes", "misses", "status"};
  for (auto& o : outs) {
    for (auto& r : o.rows) rep.rows.push_back(std::move(r));
    for (auto& f : o.failures) rep.failures.push_back(std::move(f));
    for (auto& r : o.records) rep.records.push_back(std::move(r));
  }
  return rep;
}

// --- anticoncentration-sweep -----------------------------------------------

ExperimentReport run_anticoncentration(const ExperimentConfig& c, const KeyValueConfig& kv) {
  const auto engines = kv.get_list("anticonc.engines", {"mod", "point", "collision"});
  const auto d_list = kv.get_int_list("anticonc.d_list", {2, 3, 4, 5, 6});
  const std::size_t n_lo = kv.get_uint("anticonc.n_lo", 50);
  const std::size_t n_hi = kv.get_uint("anticonc.n_hi", 200);
  const auto point_n = kv.get_int_list("anticonc.point_n", {16, 64, 256, 1024});
  const double point_lo = kv.get_double("anticonc.point_lo", 0.3);
  const double point_hi = kv.get_double("anticonc.point_hi", 0.9);
  const std::size_t pairs = kv.get_uint("anticonc.collision_pairs", 50);
  const std::size_t mc_trials = kv.get_uint("anticonc.collision_trials", 10000);
  const double min_div = kv.get_double("anticonc.collision_min_div", 0.25);
  const double bound_factor = kv.get_double("anticonc.collision_bound", 5.0);
  require_all_read(kv);
  for (const auto& e : engines) {
    if (e != "mod" && e != "point" && e != "collision") throw ConfigError("unknown engine '" + e + "'");
  }
  auto wants = [&](const char* e) { return std::find(engines.begin(), engines.end(), e) != engines.end(); };

  ExperimentReport rep;
  rep.header = {"engine", "params-hash", "value", "radius", "seed"};
  auto add = [&](TrialOut& out, const std::string& engine, const std::string& params, double value, double radius,
                 std::uint64_t seed, nlohmann::json extra) {
    const std::string hash = params_hash(engine + "|" + params);
    out.rows.push_back({engine, hash, format_double(value), format_double(radius), std::to_string(seed)});
    extra["engine"] = engine;
    extra["params"] = params;
    extra["params_hash"] = hash;
    extra["value"] = value;
    extra["radius"] = radius;
    extra["seed"] = seed;
    out.records.push_back(std::move(extra));
  };

  TrialOut fixed;
  if (wants("mod")) {
    for (auto d : d_list) {
      if (d < 2) throw ConfigError("anticonc.d_list entries must be at least 2");
      for (std::size_t n = n_lo; n <= n_hi; ++n) {
        const auto dist = binomial_mod_distribution(n, static_cast<std::size_t>(d));
        const std::string base = "n=" + str(n) + ";d=" + std::to_string(d);
        for (std::size_t k = 0; k < dist.counts.size(); ++k) {
          add(fixed, "mod", base + ";k=" + str(k), dist.probability(k), 0.0, c.graph.seed,
              {{"fraction", dist.fraction(k)}});
        }
        if (!dist.within_bounds()) fixed.failures.push_back("mod bounds fail at " + base);
        if (!dist.sums_to_one()) fixed.failures.push_back("mod law does not sum to one at " + base);
        if (d == 2 && n >= 1 && dist.counts[0] != dist.counts[1]) {
          fixed.failures.push_back("parity is not exactly even at n=" + str(n));
        }
      }
    }
  }
  if (wants("point")) {
    for (auto n : point_n) {
      if (n < 1) throw ConfigError("anticonc.point_n entries must be positive");
      const std::vector<std::int64_t> weights(static_cast<std::size_t>(n), 1);
      const std::vector<double> probs(static_cast<std::size_t>(n), 0.5);
      const double mp = max_point_probability(weights, probs);
      const double scaled = mp * std::sqrt(static_cast<double>(n));
      add(fixed, "point", "n=" + std::to_string(n) + ";p=0.5;weights=ones", mp, 0.0, c.graph.seed,
          {{"scaled", scaled}});
      if (scaled < point_lo || scaled > point_hi) {
        fixed.failures.push_back("point probability scaled by sqrt(n) is " + format_double(scaled) + " at n=" +
                                 std::to_string(n));
      }
    }
  }

  std::vector<TrialOut> outs;
  if (wants("collision")) {
    outs = run_trials(c.trials, c.threads, [&](std::size_t t) {
      TrialOut out;
      const auto spec = trial_graph(c, t);
      const BipartiteGraph g = generate(spec);
      if (g.n1() < 2) throw ConfigError("collision engine needs n1 >= 2");
      const auto need = static_cast<std::size_t>(std::ceil(min_div * static_cast<double>(g.n2())));
      const double bound = bound_factor / std::sqrt(static_cast<double>(g.n2()));
      Rng rng(derive_seed(spec.seed, 4));
      std::size_t found = 0;
      for (std::size_t attempt = 0; found < pairs && attempt < 100 * pairs; ++attempt) {
        const auto x = static_cast<Vertex>(rng.below(g.n1()));
        const auto y = static_cast<Vertex>(rng.below(g.n1()));
        if (x == y) continue;
        const std::size_t dv = div_size(g, Side::V1, x, y);
        if (dv < need) continue;
        const std::uint64_t seed = derive_seed(spec.seed, 1000 + found);
        const auto est = collision_probability_estimate(g, Side::V1, x, y, mc_trials, seed);
        add(out, "collision",
            "trial=" + str(t) + ";x=" + str(x) + ";y=" + str(y) + ";div=" + str(dv) + ";trials=" + str(mc_trials),
            est.estimate, est.radius, seed, {{"hits", est.hits}, {"bound", bound}});
        if (est.estimate > bound) {
          out.failures.push_back("collision estimate " + format_double(est.estimate) + " exceeds " +
                                 format_double(bound) + " for pair (" + str(x) + ", " + str(y) + ")");
        }
        ++found;
      }
      if (found < pairs) out.failures.push_back("trial " + str(t) + ": only " + str(found) + " diverse pairs");
      return out;
    });
  }

  outs.insert(outs.begin(), std::move(fixed));
  for (auto& o : outs) {
    for (auto& r : o.rows) rep.rows.push_back(std::move(r));
    for (auto& f : o.failures) rep.failures.push_back(std::move(f));
    for (auto& r : o.records) rep.records.push_back(std::move(r));
  }
  return rep;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  KeyValueConfig kv = config.params;
  ExperimentReport rep;
  switch (config.pipeline) {
    case Pipeline::Check:
      rep = run_check(config, kv);
      break;
    case Pipeline::Extract:
      rep = run_extract(config, kv);
      break;
    case Pipeline::SolveSweep:
      rep = run_solve_sweep(config, kv);
      break;
    case Pipeline::OracleCompare:
      rep = run_oracle_compare(config, kv);
      break;
    case Pipeline::Anticoncentration:
      rep = run_anticoncentration(config, kv);
      break;
  }
  nlohmann::json summary = {{"pipeline", pipeline_name(config.pipeline)},
                            {"rng", kRngAlgorithm},
                            {"trials", config.trials},
                            {"rows", rep.rows.size()},
                            {"passed", rep.passed()},
                            {"failures", rep.failures},
                            {"config", config.params.values()}};
  for (auto& [k, v] : rep.summary.items()) summary[k] = v;
  rep.summary = std::move(summary);
  return rep;
}

std::vector<std::filesystem::path> write_report(const ExperimentConfig& config, const ExperimentReport& report) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw Error("cannot create output directory " + config.out_dir.string() + ": " + ec.message());
  const std::string stem = pipeline_name(config.pipeline);
  std::vector<fs::path> written;
  auto open = [&](const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    written.push_back(p);
    return out;
  };
  {
    auto out = open(config.out_dir / (stem + ".csv"));
    out << csv_line(report.header) << '\n';
    for (const auto& r : report.rows) out << csv_line(r) << '\n';
  }
  if (config.write_json) {
    {
      auto out = open(config.out_dir / (stem + ".json"));
      out << report.summary.dump(2) << '\n';
    }
    auto out = open(config.out_dir / (stem + ".jsonl"));
    for (const auto& r : report.records) out << r.dump() << '\n';
  }
  return written;
}

}  // namespace bipsize
