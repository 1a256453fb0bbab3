#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bipsize/vertex_set.hpp"

namespace bipsize {

enum class Side : std::uint8_t { V1 = 0, V2 = 1 };

constexpr Side opposite(Side s) { return s == Side::V1 ? Side::V2 : Side::V1; }
const char* side_name(Side s);
/// Accepts "V1"/"V2" (case-insensitive) or "1"/"2"; throws MalformedInput.
Side parse_side(const std::string& text);

struct GenerationInfo {
  std::string model;
  std::uint64_t seed = 0;
  double density = 0.0;
};

using Edge = std::pair<Vertex, Vertex>;

/// Bipartite graph (V1, V2, E) with V1-side bitset adjacency rows.
///
/// Immutable after construction. The V2-side rows are the transpose of the
/// V1-side rows; they are built on first use and shared by copies.
class BipartiteGraph {
 public:
  BipartiteGraph() : BipartiteGraph(0, 0) {}
  /// Edgeless graph.
  BipartiteGraph(std::size_t n1, std::size_t n2);
  /// rows[i] is N(i) over V2; every row must have universe n2.
  BipartiteGraph(std::size_t n1, std::size_t n2, const std::vector<VertexSet>& rows,
                 std::optional<GenerationInfo> info = std::nullopt);

  /// Throws MalformedInput on an out-of-range endpoint. Duplicates collapse.
  static BipartiteGraph from_edges(std::size_t n1, std::size_t n2, std::span<const Edge> edges,
                                   std::optional<GenerationInfo> info = std::nullopt);

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t size(Side s) const { return s == Side::V1 ? n1_ : n2_; }
  std::size_t edge_count() const { return edge_count_; }
  double density() const;

  bool adjacent(Vertex a, Vertex b) const;

  /// N(v) as raw words over the opposite class.
  std::span<const std::uint64_t> row(Side side, Vertex v) const;
  std::size_t row_words(Side side) const { return words_for(size(opposite(side))); }
  VertexSet neighbors(Side side, Vertex v) const;
  std::size_t degree(Side side, Vertex v) const;
  /// |N(v) ∩ s| for s over the opposite class.
  std::size_t degree_into(Side side, Vertex v, const VertexSet& s) const;

  /// Sorted (V1, V2) pairs.
  std::vector<Edge> edges() const;

  BipartiteGraph transposed() const;
  /// Bipartite complement (edges become non-edges between V1 and V2).
  BipartiteGraph complement() const;
  /// G[keep1, keep2] relabelled: new index i is keep1[i] (resp. keep2[i]).
  BipartiteGraph induced(std::span<const Vertex> keep1, std::span<const Vertex> keep2) const;

  const std::optional<GenerationInfo>& info() const { return info_; }

 private:
  struct Transpose;
  const std::vector<std::uint64_t>& transpose_rows() const;
  void check_vertex(Side side, Vertex v) const;

  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::size_t words2_ = 0;
  std::vector<std::uint64_t> rows1_;  // n1 rows of words2_ words
  std::vector<std::uint32_t> degree1_;
  std::vector<std::uint32_t> degree2_;
  std::size_t edge_count_ = 0;
  std::optional<GenerationInfo> info_;
  std::shared_ptr<Transpose> transpose_;
};

/// Pair of same-class vertices ordered so that divb(p) = N(u) \ N(v), i.e.
/// d(u) >= d(v); equal degrees put the lower index first.
struct OrderedPair {
  Side side = Side::V1;
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const OrderedPair&, const OrderedPair&) = default;
};

/// Orders {a, b} by the convention above. Throws DegeneratePair if a == b.
OrderedPair make_ordered_pair(const BipartiteGraph& g, Side side, Vertex a, Vertex b);
bool respects_ordering(const BipartiteGraph& g, const OrderedPair& p);

/// e(G[u1, u2]) = |E ∩ (u1 × u2)|.
std::size_t induced_edge_count(const BipartiteGraph& g, const VertexSet& u1, const VertexSet& u2);

/// N(u) △ N(v). Throws DegeneratePair if u == v.
VertexSet div(const BipartiteGraph& g, Side side, Vertex u, Vertex v);
std::size_t div_size(const BipartiteGraph& g, Side side, Vertex u, Vertex v);

/// N(u) \ N(v) for a pair that respects the ordering convention (checked).
VertexSet divb(const BipartiteGraph& g, const OrderedPair& p);

/// Smallest r with r*r >= n.
std::size_t ceil_sqrt(std::size_t n);

/// d^S(u) - d^S(v), S over the opposite class.
std::int64_t degree_diff(const BipartiteGraph& g, const OrderedPair& p, const VertexSet& s);

// Edge-list text format: "p bip <n1> <n2>" then "e <i> <j>" per edge,
// 0-indexed. Lines starting with 'c' are comments.
BipartiteGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const BipartiteGraph& g);
BipartiteGraph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const BipartiteGraph& g);

}  // namespace bipsize
