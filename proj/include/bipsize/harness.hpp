#pragma once

// Flat key=value configs, experiment pipelines and their CSV/JSON reports.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bipsize/errors.hpp"
#include "bipsize/generators.hpp"
#include "bipsize/solver.hpp"

namespace bipsize {

/// `key = value` per line; `#` starts a comment; later keys override
/// earlier ones. Typed getters throw ConfigError on unparsable values.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::int64_t> get_int_list(const std::string& key, const std::vector<std::int64_t>& fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;
  /// Comma-separated words, trimmed.
  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Keys never read through a getter.
  std::vector<std::string> unused() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  const std::string* lookup(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
};

enum class Pipeline { Check, Extract, SolveSweep, OracleCompare, Anticoncentration };
Pipeline parse_pipeline(const std::string& name);
const char* pipeline_name(Pipeline p);

struct ExperimentConfig {
  Pipeline pipeline = Pipeline::Check;
  GeneratorSpec graph;
  std::size_t trials = 1;
  /// Worker threads for trials; reports are assembled in trial order.
  std::size_t threads = 1;
  std::filesystem::path out_dir = "out";
  bool write_json = true;
  /// Every other key, read by the pipeline.
  KeyValueConfig params;
  SolverConfig solver;
  /// Unset: each trial's solver seed is its graph seed.
  std::optional<std::uint64_t> solver_seed;

  /// Reads pipeline, model, n1, n2, p, seed, base, path, trials, threads,
  /// out, formats, rng and solver.* keys; the rest stays in `params`.
  /// Trial t uses graph seed `seed + t`.
  static ExperimentConfig from(const KeyValueConfig& kv);
};

struct ExperimentReport {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> failures;
  nlohmann::json summary;
  /// JSON lines (witnesses, structures) written beside the CSV.
  std::vector<nlohmann::json> records;

  bool passed() const { return failures.empty(); }
};

/// Runs the pipeline; does not touch the filesystem.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes <pipeline>.csv, and with JSON enabled <pipeline>.json and
/// <pipeline>.jsonl. Returns the paths written.
std::vector<std::filesystem::path> write_report(const ExperimentConfig& config, const ExperimentReport& report);

std::string csv_line(const std::vector<std::string>& cells);
/// Shortest round-trip decimal form.
std::string format_double(double x);
/// 16 hex digits of FNV-1a over the text.
std::string params_hash(const std::string& text);

}  // namespace bipsize
