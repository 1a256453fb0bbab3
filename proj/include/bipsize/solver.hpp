#pragma once

// Induced subgraphs with a prescribed number of edges: the interval
// construction (structures, good W, sumset progression, residue vertex and
// bridging vertices), the per-target solver that glues star slices and
// sub-grid intervals, and the exhaustive achievable-size oracle.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bipsize/errors.hpp"
#include "bipsize/graph.hpp"

namespace bipsize {

struct SizeWitness {
  VertexSet u1;
  VertexSet u2;
  std::size_t edge_count = 0;
  nlohmann::json provenance;
};

/// Recounts e(G[u1, u2]) and compares with the stored count.
bool verify_witness(const BipartiteGraph& g, const SizeWitness& w);
nlohmann::json to_json(const SizeWitness& w, std::size_t target);

struct SolverConfig {
  double C = 2.0;
  double eps = 0.05;
  double delta = 0.25;
  std::int64_t d0 = 6;
  std::size_t L = 12;
  double C0 = 4.0;
  double c = 0.25;
  double frac_u1 = 0.5;
  double frac_u2 = 0.25;
  double frac_u3 = 0.25;
  /// 0 picks ceil(sqrt |V2'|).
  std::size_t structure_size = 0;
  /// 0 picks ceil(C0 sqrt n2).
  std::size_t family_size = 0;
  /// 0 picks max(1, ceil(sqrt |V2'|) / 2).
  std::size_t min_private = 0;
  std::size_t w_attempts = 64;
  std::size_t residue_retries = 3;
  /// Add V2 \ V2' to every sampled W.
  bool anchor_rest = false;
  /// Bridge with every V1 vertex left unused instead of U3 alone.
  bool bridge_unused = false;
  /// Bridge only with vertices whose W-degree is typical.
  bool bridge_typical_only = true;
  /// Exact fallback runs when the smaller class has at most this many vertices.
  std::size_t fallback_budget = 20;
  /// Sub-grid sizes shrink by this ratio.
  double ladder_ratio = 0.75;
  std::size_t cell_attempts = 1;
  bool eager_witnesses = false;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// Raised by construct_interval; names the failing stage.
class SolverStageError : public Error {
 public:
  SolverStageError(std::string stage, const std::string& detail);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Nothing produced the requested size; lists what was tried.
class Unsolved : public Error {
 public:
  Unsolved(std::size_t target, std::vector<std::string> paths);
  const std::vector<std::string>& paths() const { return paths_; }

 private:
  std::vector<std::string> paths_;
};

struct IntervalStats {
  std::size_t structures = 0;
  std::size_t good_structures = 0;
  std::size_t s2_size = 0;
  std::size_t w_size = 0;
  std::size_t w_attempts = 0;
  bool residues_relaxed = false;
  std::size_t bridge_size = 0;
  std::size_t e0 = 0;
  std::int64_t progression_a = 0;
  std::int64_t progression_d = 1;
  std::size_t progression_length = 0;
};

/// Outcome of one interval construction. Witnesses are rebuilt on demand
/// and recount-verified.
class IntervalResult {
 public:
  struct State;
  explicit IntervalResult(std::shared_ptr<const State> state);

  std::size_t lo() const;
  std::size_t hi() const;
  /// Every size this construction can realize (not only the interval).
  bool covers(std::size_t m) const;
  std::vector<std::size_t> covered() const;
  std::optional<SizeWitness> witness(std::size_t m) const;
  /// Filled only when eager witnesses were requested.
  const std::map<std::size_t, SizeWitness>& witnesses() const;
  const IntervalStats& stats() const;

 private:
  std::shared_ptr<const State> state_;
};

/// Requires density_in_bounds; throws SolverStageError("density" |
/// "extraction" | "good-W" | "progression" | "bridging").
IntervalResult construct_interval(const BipartiteGraph& g, const SolverConfig& config);

/// Exact {e(G[U1, U2])}. Enumerates subsets of the smaller class, which must
/// have at most `budget` vertices (BudgetExceeded otherwise).
std::vector<std::size_t> achievable_sizes_oracle(const BipartiteGraph& g, std::size_t budget = 20);

/// Star slices, then cached interval constructions over a geometric
/// sub-grid ladder, then the exact fallback on small graphs.
class SizeSolver {
 public:
  SizeSolver(const BipartiteGraph& g, SolverConfig config);
  ~SizeSolver();
  SizeSolver(const SizeSolver&) = delete;
  SizeSolver& operator=(const SizeSolver&) = delete;

  /// Throws Unsolved.
  SizeWitness solve(std::size_t m);
  std::optional<SizeWitness> try_solve(std::size_t m);
  std::size_t cells_built() const;
  std::size_t cells_failed() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SizeWitness solve_target(const BipartiteGraph& g, std::size_t m, const SolverConfig& config);

}  // namespace bipsize
