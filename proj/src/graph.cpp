#include "bipsize/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "bipsize/errors.hpp"
#include "bipsize/kernels.hpp"

namespace bipsize {

struct BipartiteGraph::Transpose {
  std::once_flag once;
  std::vector<std::uint64_t> rows;  // n2 rows of words_for(n1) words
};

const char* side_name(Side s) { return s == Side::V1 ? "V1" : "V2"; }

Side parse_side(const std::string& text) {
  std::string t;
  for (char ch : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (t == "V1" || t == "1") return Side::V1;
  if (t == "V2" || t == "2") return Side::V2;
  throw MalformedInput("unknown side '" + text + "'");
}

BipartiteGraph::BipartiteGraph(std::size_t n1, std::size_t n2)
    : n1_(n1),
      n2_(n2),
      words2_(words_for(n2)),
      rows1_(n1 * words_for(n2), 0),
      degree1_(n1, 0),
      degree2_(n2, 0),
      transpose_(std::make_shared<Transpose>()) {}

BipartiteGraph::BipartiteGraph(std::size_t n1, std::size_t n2, const std::vector<VertexSet>& rows,
                               std::optional<GenerationInfo> info)
    : BipartiteGraph(n1, n2) {
  if (rows.size() != n1) throw MalformedInput("adjacency row count differs from n1");
  info_ = std::move(info);
  for (std::size_t i = 0; i < n1; ++i) {
    if (rows[i].universe() != n2) throw MalformedInput("adjacency row universe differs from n2");
    auto words = rows[i].words();
    std::copy(words.begin(), words.end(), rows1_.begin() + static_cast<std::ptrdiff_t>(i * words2_));
    degree1_[i] = static_cast<std::uint32_t>(rows[i].count());
    edge_count_ += degree1_[i];
    rows[i].for_each([&](Vertex j) { ++degree2_[j]; });
  }
}

BipartiteGraph BipartiteGraph::from_edges(std::size_t n1, std::size_t n2,
                                          std::span<const Edge> edges,
                                          std::optional<GenerationInfo> info) {
  std::vector<VertexSet> rows(n1, VertexSet(n2));
  for (const auto& [a, b] : edges) {
    if (a >= n1 || b >= n2) {
      throw MalformedInput("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                           ") outside " + std::to_string(n1) + "x" + std::to_string(n2));
    }
    rows[a].set(b);
  }
  return BipartiteGraph(n1, n2, rows, std::move(info));
}

double BipartiteGraph::density() const {
  if (n1_ == 0 || n2_ == 0) return 0.0;
  return static_cast<double>(edge_count_) / (static_cast<double>(n1_) * static_cast<double>(n2_));
}

void BipartiteGraph::check_vertex(Side side, Vertex v) const {
  if (v >= size(side)) {
    throw MalformedInput(std::string("vertex ") + std::to_string(v) + " out of range for " +
                         side_name(side) + " of size " + std::to_string(size(side)));
  }
}

bool BipartiteGraph::adjacent(Vertex a, Vertex b) const {
  check_vertex(Side::V1, a);
  check_vertex(Side::V2, b);
  return (rows1_[a * words2_ + b / 64] >> (b % 64)) & 1U;
}

const std::vector<std::uint64_t>& BipartiteGraph::transpose_rows() const {
  std::call_once(transpose_->once, [this] {
    const std::size_t words1 = words_for(n1_);
    transpose_->rows.assign(n2_ * words1, 0);
    for (std::size_t i = 0; i < n1_; ++i) {
      const std::uint64_t* r = rows1_.data() + i * words2_;
      for (std::size_t w = 0; w < words2_; ++w) {
        std::uint64_t bits = r[w];
        while (bits != 0) {
          const std::size_t j = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
          transpose_->rows[j * words1 + i / 64] |= std::uint64_t{1} << (i % 64);
          bits &= bits - 1;
        }
      }
    }
  });
  return transpose_->rows;
}

std::span<const std::uint64_t> BipartiteGraph::row(Side side, Vertex v) const {
  check_vertex(side, v);
  if (side == Side::V1) return {rows1_.data() + v * words2_, words2_};
  const std::size_t words1 = words_for(n1_);
  return {transpose_rows().data() + v * words1, words1};
}

VertexSet BipartiteGraph::neighbors(Side side, Vertex v) const {
  return VertexSet::from_words(size(opposite(side)), row(side, v));
}

std::size_t BipartiteGraph::degree(Side side, Vertex v) const {
  check_vertex(side, v);
  return side == Side::V1 ? degree1_[v] : degree2_[v];
}

std::size_t BipartiteGraph::degree_into(Side side, Vertex v, const VertexSet& s) const {
  if (s.universe() != size(opposite(side))) {
    throw MalformedInput("degree_into: set universe does not match the opposite class");
  }
  auto r = row(side, v);
  return static_cast<std::size_t>(kernels::active().popcount_and(r.data(), s.words().data(), r.size()));
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < n1_; ++i) {
    VertexSet::from_words(n2_, row(Side::V1, i)).for_each([&](Vertex j) { out.emplace_back(i, j); });
  }
  return out;
}

BipartiteGraph BipartiteGraph::transposed() const {
  std::vector<VertexSet> rows;
  rows.reserve(n2_);
  for (std::size_t j = 0; j < n2_; ++j) rows.push_back(neighbors(Side::V2, j));
  return BipartiteGraph(n2_, n1_, rows, info_);
}

BipartiteGraph BipartiteGraph::complement() const {
  std::vector<VertexSet> rows;
  rows.reserve(n1_);
  for (std::size_t i = 0; i < n1_; ++i) rows.push_back(neighbors(Side::V1, i).complement());
  std::optional<GenerationInfo> info;
  if (info_) info = GenerationInfo{"complement-of:" + info_->model, info_->seed, 1.0 - info_->density};
  return BipartiteGraph(n1_, n2_, rows, info);
}

BipartiteGraph BipartiteGraph::induced(std::span<const Vertex> keep1,
                                       std::span<const Vertex> keep2) const {
  for (Vertex a : keep1) check_vertex(Side::V1, a);
  for (Vertex b : keep2) check_vertex(Side::V2, b);
  std::vector<VertexSet> rows(keep1.size(), VertexSet(keep2.size()));
  for (std::size_t i = 0; i < keep1.size(); ++i) {
    const std::uint64_t* r = rows1_.data() + keep1[i] * words2_;
    for (std::size_t j = 0; j < keep2.size(); ++j) {
      if ((r[keep2[j] / 64] >> (keep2[j] % 64)) & 1U) rows[i].set(j);
    }
  }
  return BipartiteGraph(keep1.size(), keep2.size(), rows);
}

OrderedPair make_ordered_pair(const BipartiteGraph& g, Side side, Vertex a, Vertex b) {
  if (a == b) throw DegeneratePair("pair uses vertex " + std::to_string(a) + " twice");
  const std::size_t da = g.degree(side, a);
  const std::size_t db = g.degree(side, b);
  if (da > db || (da == db && a < b)) return {side, a, b};
  return {side, b, a};
}

bool respects_ordering(const BipartiteGraph& g, const OrderedPair& p) {
  if (p.u == p.v) return false;
  const std::size_t du = g.degree(p.side, p.u);
  const std::size_t dv = g.degree(p.side, p.v);
  return du > dv || (du == dv && p.u < p.v);
}

std::size_t induced_edge_count(const BipartiteGraph& g, const VertexSet& u1, const VertexSet& u2) {
  if (u1.universe() != g.n1() || u2.universe() != g.n2()) {
    throw MalformedInput("induced_edge_count: vertex sets do not match the graph's classes");
  }
  const auto& k = kernels::active();
  const std::uint64_t* mask = u2.words().data();
  std::size_t total = 0;
  u1.for_each([&](Vertex x) {
    auto r = g.row(Side::V1, x);
    total += static_cast<std::size_t>(k.popcount_and(r.data(), mask, r.size()));
  });
  return total;
}

VertexSet div(const BipartiteGraph& g, Side side, Vertex u, Vertex v) {
  if (u == v) throw DegeneratePair("div of vertex " + std::to_string(u) + " with itself");
  return g.neighbors(side, u) ^ g.neighbors(side, v);
}

std::size_t div_size(const BipartiteGraph& g, Side side, Vertex u, Vertex v) {
  if (u == v) throw DegeneratePair("div of vertex " + std::to_string(u) + " with itself");
  auto a = g.row(side, u);
  auto b = g.row(side, v);
  return static_cast<std::size_t>(kernels::active().popcount_xor(a.data(), b.data(), a.size()));
}

VertexSet divb(const BipartiteGraph& g, const OrderedPair& p) {
  if (p.u == p.v) throw DegeneratePair("divb of vertex " + std::to_string(p.u) + " with itself");
  if (!respects_ordering(g, p)) {
    throw MalformedInput("pair (" + std::to_string(p.u) + ", " + std::to_string(p.v) +
                         ") violates the ordering convention");
  }
  return g.neighbors(p.side, p.u) - g.neighbors(p.side, p.v);
}

std::size_t ceil_sqrt(std::size_t n) {
  std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while (r * r < n) ++r;
  return r;
}

std::int64_t degree_diff(const BipartiteGraph& g, const OrderedPair& p, const VertexSet& s) {
  return static_cast<std::int64_t>(g.degree_into(p.side, p.u, s)) -
         static_cast<std::int64_t>(g.degree_into(p.side, p.v, s));
}

BipartiteGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::size_t, std::size_t>> dims;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == 'c') continue;
    auto fail = [&](const std::string& why) {
      throw MalformedInput("edge list line " + std::to_string(line_no) + ": " + why);
    };
    if (tag == "p") {
      std::string kind;
      long long a = -1, b = -1;
      if (dims) fail("duplicate header");
      if (!(ls >> kind >> a >> b) || kind != "bip" || a < 0 || b < 0) fail("bad header");
      dims = {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
    } else if (tag == "e") {
      long long a = -1, b = -1;
      if (!dims) fail("edge before header");
      if (!(ls >> a >> b) || a < 0 || b < 0) fail("bad edge");
      if (static_cast<std::size_t>(a) >= dims->first || static_cast<std::size_t>(b) >= dims->second) {
        fail("edge endpoint out of range");
      }
      edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!dims) throw MalformedInput("edge list has no 'p bip' header");
  return BipartiteGraph::from_edges(dims->first, dims->second, edges);
}

void write_edge_list(std::ostream& out, const BipartiteGraph& g) {
  out << "p bip " << g.n1() << ' ' << g.n2() << '\n';
  for (const auto& [a, b] : g.edges()) out << "e " << a << ' ' << b << '\n';
}

BipartiteGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

void save_edge_list(const std::string& path, const BipartiteGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write edge list '" + path + "'");
  write_edge_list(out, g);
}

}  // namespace bipsize
