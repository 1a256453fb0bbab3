#pragma once

// Checkable forms of the structural hypotheses on bipartite Ramsey graphs:
// the Ramsey property itself, density and degree bounds, private
// neighbourhood sequences, richness, diversity and pair-diversity.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bipsize/errors.hpp"
#include "bipsize/graph.hpp"

namespace bipsize {

/// Ramsey constant C with the thresholds derived from it.
struct RamseyParams {
  double C = 2.0;

  /// C * log2(n)
  double threshold(std::size_t n) const;
  /// (16C)^-1
  double epsilon_density() const { return 1.0 / (16.0 * C); }
  /// (32C)^-1
  double epsilon_degree() const { return 1.0 / (32.0 * C); }
};

/// ceil(n^(1/5)), the tolerance used by richness and both diversity notions.
std::size_t fifth_root_allowance(std::size_t n);

enum class RamseyVerdict { Ramsey, NotRamsey, Unknown };
const char* verdict_name(RamseyVerdict v);

/// A ⊆ V1, B ⊆ V2 with G[A, B] complete (complete = true) or empty.
struct HomogeneousWitness {
  VertexSet a;
  VertexSet b;
  bool complete = true;
};

struct RamseyReport {
  RamseyVerdict verdict = RamseyVerdict::Unknown;
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  /// Thresholds exceed a class size, so no copy can exist.
  bool degenerate_threshold = false;
  std::optional<HomogeneousWitness> witness;
  std::uint64_t nodes = 0;
};

struct RamseySearchOptions {
  std::uint64_t node_budget = 50'000'000;
};

/// Exact search for an induced K_{t1,t2} or its bipartite complement with
/// t_i = ceil(C log2 n_i). Requires n1, n2 >= 2.
RamseyReport is_c_ramsey(const BipartiteGraph& g, const RamseyParams& params,
                         const RamseySearchOptions& options = {});

/// e(G) / (n1 n2) within [(16C)^-1, 1 - (16C)^-1].
bool density_in_bounds(const BipartiteGraph& g, const RamseyParams& params);

/// Vertices of `side` with degree in [(32C)^-1 n_opp, (1 - (32C)^-1) n_opp].
VertexSet degree_typical_vertices(const BipartiteGraph& g, Side side, const RamseyParams& params);

/// u_1..u_L from V1 with their private neighbourhoods
/// N(u_i) \ ∪_{j<i} N(u_j) and residuals V2 \ ∪_{j<=i} N(u_j).
struct PrivateNeighborhoodSeq {
  std::vector<Vertex> vertices;
  std::vector<VertexSet> private_sets;
  std::vector<VertexSet> residual_sets;
  std::size_t size() const { return vertices.size(); }
};

struct PrivateSeqOptions {
  /// Restricts the pool of V1 candidates.
  std::optional<VertexSet> candidates;
  /// When set, candidates must also be degree-typical in G[S_i, T_i] for this C.
  std::optional<double> typical_C;
};

/// Greedy construction: at step i take the candidate with private set at
/// least `min_private` that maximises min(|private|, |residual|), lowest
/// index on ties. Throws PrivateSeqFailure naming the failing step.
PrivateNeighborhoodSeq find_private_neighborhood_seq(const BipartiteGraph& g, std::size_t L,
                                                     std::size_t min_private,
                                                     const PrivateSeqOptions& options = {});

class PrivateSeqFailure : public Error {
 public:
  PrivateSeqFailure(std::size_t step, PrivateNeighborhoodSeq partial);
  /// 1-based step that had no admissible candidate.
  std::size_t step() const { return step_; }
  const PrivateNeighborhoodSeq& partial() const { return partial_; }

 private:
  std::size_t step_;
  PrivateNeighborhoodSeq partial_;
};

/// Opposite-class vertices v with |N(v) ∩ W| <= eps n_opp or
/// |W \ N(v)| < eps n_opp, where W lies in `side_of_w`.
VertexSet richness_deficient_vertices(const BipartiteGraph& g, Side side_of_w, const VertexSet& w,
                                      double eps);

struct RichnessOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  /// Classes of at most this many vertices are checked exhaustively.
  std::size_t exhaustive_limit = 16;
  /// Extra sets to test on top of the sampled ones (any side; sets smaller
  /// than delta * n_side are skipped).
  std::vector<std::pair<Side, VertexSet>> extra_candidates;
};

struct RichnessViolation {
  Side side_of_w;
  VertexSet w;
  VertexSet deficient;
};

struct RichnessReport {
  /// True only when the check covered every W (exhaustive mode, both sides).
  bool proven = false;
  std::optional<RichnessViolation> violation;
  std::size_t sets_tested = 0;
  bool violation_found() const { return violation.has_value(); }
};

/// Refutation search for (delta, eps)-richness. Small classes are swept
/// exhaustively; larger ones use sampled W plus greedy shrinking (shrinking
/// W can only enlarge the deficient set).
RichnessReport check_richness(const BipartiteGraph& g, double delta, double eps,
                              const RichnessOptions& options = {});

struct DiversityViolation {
  Vertex vertex;
  std::size_t close_count;
};

/// Vertices with more than ceil(n_side^(1/5)) others at div distance <= c n_opp.
std::vector<DiversityViolation> diversity_violations(const BipartiteGraph& g, Side side, double c);
/// Per-vertex count of w != v with |div(v, w)| <= c n_opp.
std::vector<std::size_t> close_vertex_counts(const BipartiteGraph& g, Side side, double c);

struct PairDiversityViolation {
  OrderedPair pair;
  std::size_t packing;
};

struct PairDiversityOptions {
  /// Above this many candidate pairs the scan samples `sample_pairs` of them.
  std::size_t max_pairs = 1'000'000;
  std::size_t sample_pairs = 20'000;
  std::uint64_t seed = 0;
};

/// Vertices z of p's class with |divb(p) \ N(z)| <= c n_opp.
VertexSet covering_vertices(const BipartiteGraph& g, const OrderedPair& p, double c);

/// Greedy lowest-index-first packing of vertex-disjoint pairs (x, y) with x
/// or y covering divb(p). Each covering vertex is matched first to the
/// lowest unused non-covering vertex, then to another covering vertex.
std::vector<std::pair<Vertex, Vertex>> covering_pair_packing(const BipartiteGraph& g,
                                                              const OrderedPair& p, double c);

std::vector<PairDiversityViolation> pair_diversity_violations(
    const BipartiteGraph& g, Side side, double c, double alpha,
    const PairDiversityOptions& options = {});

}  // namespace bipsize
