#pragma once

// Pair-stars and pair-matchings: families of vertices in one class whose
// neighbourhoods pairwise differ a lot while their degrees stay close.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bipsize/errors.hpp"
#include "bipsize/graph.hpp"

namespace bipsize {

/// Root x_0 with leaves x_1..x_k.
struct PairStar {
  Side side = Side::V1;
  Vertex root = 0;
  std::vector<Vertex> leaves;
  double eps = 0.0;
};

/// Vertex-disjoint ordered pairs (x_i, y_i).
struct PairMatching {
  Side side = Side::V1;
  std::vector<OrderedPair> pairs;
  double eps = 0.0;
};

class PairStructure {
 public:
  PairStructure(PairStar star) : v_(std::move(star)) {}
  PairStructure(PairMatching matching) : v_(std::move(matching)) {}

  bool is_star() const { return std::holds_alternative<PairStar>(v_); }
  const PairStar& star() const { return std::get<PairStar>(v_); }
  const PairMatching& matching() const { return std::get<PairMatching>(v_); }
  const char* kind() const { return is_star() ? "star" : "matching"; }

  Side side() const;
  double eps() const;
  /// Leaves for a star, pairs for a matching.
  std::size_t size() const;
  /// {x_0} for a star, {x_i} for a matching.
  std::vector<Vertex> head() const;
  std::vector<Vertex> vertices() const;

 private:
  std::variant<PairStar, PairMatching> v_;
};

/// Every definitional condition recomputed from g. Empty on success.
std::vector<std::string> structure_violations(const BipartiteGraph& g, const PairStructure& s);
inline bool verify_structure(const BipartiteGraph& g, const PairStructure& s) {
  return structure_violations(g, s).empty();
}

nlohmann::json to_json(const PairStructure& s);
PairStructure structure_from_json(const nlohmann::json& j);

class ExtractionFailure : public Error {
 public:
  ExtractionFailure(std::size_t achieved, std::size_t target);
  std::size_t achieved() const { return achieved_; }
  std::size_t target() const { return target_; }

 private:
  std::size_t achieved_;
  std::size_t target_;
};

/// Raised by extract_disjoint_family; carries the structures found so far.
class FamilyExtractionFailure : public ExtractionFailure {
 public:
  FamilyExtractionFailure(std::vector<PairStructure> partial, std::size_t family_size,
                          std::size_t inner_achieved);
  const std::vector<PairStructure>& partial() const { return partial_; }
  std::size_t inner_achieved() const { return inner_achieved_; }

 private:
  std::vector<PairStructure> partial_;
  std::size_t inner_achieved_;
};

struct ExtractOptions {
  /// Pre-filter threshold on |div| for bucket pairs; defaults to eps.
  std::optional<double> eps0;
  /// Only these vertices of the side may be used.
  std::optional<VertexSet> allowed;
  /// Above this many candidates conflicts are evaluated on demand.
  std::size_t explicit_conflict_limit = 4096;
  /// Star roots tried before giving up on the star branch.
  std::size_t max_roots = 64;
};

/// Degree bucketing, div pre-filter, star-or-matching in the pair graph, then
/// a min-conflict greedy filter. The result is re-verified before return.
/// Throws ExtractionFailure with the best size reached.
PairStructure extract_pair_structure(const BipartiteGraph& g, Side side, double eps,
                                     std::size_t target_size, std::uint64_t seed,
                                     const ExtractOptions& options = {});

/// Sequential extraction on the unused, non-forbidden vertices.
std::vector<PairStructure> extract_disjoint_family(const BipartiteGraph& g, Side side, double eps,
                                                   std::size_t per_structure_size,
                                                   std::size_t family_size,
                                                   const VertexSet& forbidden, std::uint64_t seed,
                                                   const ExtractOptions& options = {});

/// Either m+1 edges at one vertex or m pairwise disjoint edges of a simple
/// graph given by edge list. Found by max degree, then a greedy maximal
/// matching; guaranteed whenever there are at least 2m^2 edges.
struct StarOrMatching {
  bool star = false;
  Vertex center = 0;
  /// Indices into the edge list.
  std::vector<std::size_t> edges;
};
std::optional<StarOrMatching> find_star_or_matching(std::size_t vertex_count,
                                                    const std::vector<std::pair<Vertex, Vertex>>& edges,
                                                    std::size_t m);

/// Greedy independent set: repeatedly keep the live candidate with the
/// fewest live conflicts (lowest index on ties) and drop its conflicters.
/// Returns kept indices in selection order.
std::vector<std::size_t> min_conflict_greedy(std::size_t count,
                                             const std::function<bool(std::size_t, std::size_t)>& conflict,
                                             std::size_t explicit_limit = 4096);

}  // namespace bipsize
