#pragma once

// Point probabilities of weighted Bernoulli sums, |X| mod d for uniform X,
// degree-shift sets of pair structures against a random W, collision
// estimates and modular residue coverage.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bipsize/errors.hpp"
#include "bipsize/graph.hpp"
#include "bipsize/ramsey_metrics.hpp"
#include "bipsize/rng.hpp"
#include "bipsize/structures.hpp"

namespace bipsize {

/// Default cap on Σ|a_i| for the exact convolution.
inline constexpr std::size_t kDefaultSupportBudget = std::size_t{1} << 24;

/// Law of Σ a_i X_i, X_i ~ Bernoulli(p_i): mass[k] = P(sum = offset + k).
struct PointDistribution {
  std::int64_t offset = 0;
  std::vector<double> mass;
  double at(std::int64_t x) const;
  double max() const;
};

/// Throws MalformedInput on zero weights, length mismatch or p outside
/// [0, 1]; BudgetExceeded when Σ|a_i| exceeds the budget.
PointDistribution point_distribution(std::span<const std::int64_t> weights, std::span<const double> probs,
                                     std::size_t support_budget = kDefaultSupportBudget);

/// sup_x P(Σ a_i X_i = x).
double max_point_probability(std::span<const std::int64_t> weights, std::span<const double> probs,
                             std::size_t support_budget = kDefaultSupportBudget);
double point_probability(std::span<const std::int64_t> weights, std::span<const double> probs,
                         std::int64_t x, std::size_t support_budget = kDefaultSupportBudget);

using BigInt = boost::multiprecision::cpp_int;

/// Exact law of |X| mod d for X uniform over subsets of [n]:
/// P(k) = counts[k] / 2^n.
struct ModDistribution {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<BigInt> counts;
  BigInt total;  // 2^n

  double probability(std::size_t k) const;
  /// "counts[k]/2^n" reduced.
  std::string fraction(std::size_t k) const;
  /// 1/(d+1) <= P(k) <= 1/(d-1) for every k, decided exactly.
  bool within_bounds() const;
  bool sums_to_one() const;
};

/// Requires d >= 2.
ModDistribution binomial_mod_distribution(std::size_t n, std::size_t d);

/// Smallest n0 <= n_max with the bounds holding for every n in [n0, n_max].
std::optional<std::size_t> empirical_threshold(std::size_t d, std::size_t n_max);

/// Each of n elements independently with probability 1/2.
VertexSet sample_W(std::size_t n, std::uint64_t seed);
VertexSet sample_W(std::size_t n, Rng& rng);

/// Shift values of one structure against W, clipped to
/// [-3 ceil(sqrt n'), 3 ceil(sqrt n')] with n' the size of W's class.
/// Star: d^W(x_j) - d^W(x_0), realizer j (1-based leaf index).
/// Matching: d^W(x_i) - d^W(y_i), realizer i (0-based pair index).
struct DegreeShiftSet {
  std::size_t structure_id = 0;
  std::int64_t clip = 0;
  /// +1 for stars; -1 for matchings, where swapping x for y changes the
  /// count by the negated shift.
  int edit_sign = 1;
  std::map<std::int64_t, std::size_t> realizers;  // value -> lowest realizer

  std::size_t size() const { return realizers.size(); }
  std::vector<std::int64_t> values() const;
  /// Edge count change when the swap realizing `value` is applied.
  std::int64_t edit_delta(std::int64_t value) const { return edit_sign * value; }
  std::vector<std::int64_t> edit_deltas() const;
};

DegreeShiftSet degree_shift_set(const BipartiteGraph& g, const PairStructure& s, const VertexSet& w,
                                std::size_t structure_id = 0);

/// Raw (unclipped) shift of realizer `index` by direct recount.
std::int64_t shift_of(const BipartiteGraph& g, const PairStructure& s, std::size_t index, const VertexSet& w);

/// Every value recounts from its realizer and lies in the clip range.
bool verify_degree_shift_set(const BipartiteGraph& g, const PairStructure& s, const VertexSet& w,
                             const DegreeShiftSet& a);

/// Vertex set after the swap of realizer `index` applied to `current`
/// (which must contain the structure's head): star swaps x_0 for x_j,
/// matching swaps x_i for y_i.
void apply_swap(const PairStructure& s, std::size_t index, VertexSet& current);

struct CollisionEstimate {
  double estimate = 0.0;
  /// 95% normal-approximation half-width.
  double radius = 0.0;
  std::size_t trials = 0;
  std::size_t hits = 0;
};

/// P(d^W(x) = d^W(y)) over W uniform in the opposite class.
CollisionEstimate collision_probability_estimate(const BipartiteGraph& g, Side side, Vertex x, Vertex y,
                                                 std::size_t trials, std::uint64_t seed);
/// P(D_p^W = D_q^W) for two ordered pairs on the same side.
CollisionEstimate collision_probability_estimate(const BipartiteGraph& g, const OrderedPair& p,
                                                 const OrderedPair& q, std::size_t trials,
                                                 std::uint64_t seed);

/// Exact counterparts through point_probability.
double exact_collision_probability(const BipartiteGraph& g, Side side, Vertex x, Vertex y);
double exact_collision_probability(const BipartiteGraph& g, const OrderedPair& p, const OrderedPair& q);

/// For every 2 <= m <= d_max and 0 <= k < m, an index i into `vertices`
/// with d^W(vertices[i]) = k (mod m). Vertices live in V1, W in V2.
struct ResidueCoverage {
  std::size_t d_max = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> table;  // (k, m) -> index

  std::size_t missing() const;
  bool complete() const { return missing() == 0; }
  std::optional<std::size_t> find(std::size_t k, std::size_t m) const;
};

ResidueCoverage residue_coverage(const BipartiteGraph& g, std::span<const Vertex> vertices, const VertexSet& w,
                                 std::size_t d_max);
bool verify_residue_coverage(const BipartiteGraph& g, std::span<const Vertex> vertices, const VertexSet& w,
                             const ResidueCoverage& coverage);

struct GoodWOptions {
  std::size_t d_max = 6;
  double delta = 0.25;
  std::size_t max_attempts = 64;
  std::uint64_t seed = 0;
  /// W is drawn inside this V2 mask; defaults to all of V2.
  std::optional<VertexSet> pool;
  /// Always added to W after sampling (disjoint from the pool).
  std::optional<VertexSet> anchor;
};

struct GoodW {
  VertexSet w;
  std::vector<DegreeShiftSet> shifts;
  ResidueCoverage coverage;
  /// Structures with |A_i| >= delta ceil(sqrt n'), in index order.
  std::vector<std::size_t> good;
  std::size_t attempts = 0;
};

class SearchFailure : public Error {
 public:
  SearchFailure(std::size_t attempts, std::size_t e1, std::size_t e2, std::size_t e3);
  std::size_t attempts() const { return attempts_; }
  std::size_t e1_failures() const { return e1_; }
  std::size_t e2_failures() const { return e2_; }
  std::size_t e3_failures() const { return e3_; }

 private:
  std::size_t attempts_, e1_, e2_, e3_;
};

/// Resamples W until at least half the structures have large shift sets,
/// residue coverage from s2's vertices is complete, and the sampled part
/// has at least a quarter of the pool. Structures live in V1.
GoodW good_W_search(const BipartiteGraph& g, const std::vector<PairStructure>& structures,
                    const PrivateNeighborhoodSeq& s2, const GoodWOptions& options);

}  // namespace bipsize
