#pragma once

// Input generators and brute-force oracles for the tests. The oracles work on
// plain adjacency matrices and never call the library's counting code.

#include <cstdint>
#include <cstdlib>
#include <string>
#include <random>
#include <set>
#include <vector>

#include "bipsize/graph.hpp"
#include "bipsize/structures.hpp"

namespace testing_support {

using Matrix = std::vector<std::vector<bool>>;

struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng);
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

  Matrix matrix(std::size_t n1, std::size_t n2, double p) {
    Matrix m(n1, std::vector<bool>(n2));
    for (auto& row : m) {
      for (std::size_t j = 0; j < n2; ++j) row[j] = coin(p);
    }
    return m;
  }

  bipsize::VertexSet subset(std::size_t n, double p = 0.5) {
    bipsize::VertexSet s(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(p)) s.insert(static_cast<bipsize::Vertex>(i));
    }
    return s;
  }
};

inline bipsize::BipartiteGraph from_matrix(const Matrix& m, std::size_t n2) {
  std::vector<bipsize::Edge> edges;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (m[i][j]) edges.emplace_back(static_cast<bipsize::Vertex>(i), static_cast<bipsize::Vertex>(j));
    }
  }
  return bipsize::BipartiteGraph::from_edges(m.size(), n2, edges);
}

inline Matrix to_matrix(const bipsize::BipartiteGraph& g) {
  Matrix m(g.n1(), std::vector<bool>(g.n2()));
  for (auto [a, b] : g.edges()) m[a][b] = true;
  return m;
}

inline bool in(const bipsize::VertexSet& s, std::size_t v) { return s.test(static_cast<bipsize::Vertex>(v)); }

inline std::size_t brute_count(const Matrix& m, const bipsize::VertexSet& u1, const bipsize::VertexSet& u2) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!in(u1, i)) continue;
    for (std::size_t j = 0; j < m[i].size(); ++j) e += (m[i][j] && in(u2, j)) ? 1 : 0;
  }
  return e;
}

/// Every e(G[U1, U2]) by enumerating both classes.
inline std::set<std::size_t> brute_sizes(const Matrix& m, std::size_t n2) {
  const std::size_t n1 = m.size();
  std::set<std::size_t> out;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n1); ++a) {
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n2); ++b) {
      std::size_t e = 0;
      for (std::size_t i = 0; i < n1; ++i) {
        if (!((a >> i) & 1)) continue;
        for (std::size_t j = 0; j < n2; ++j) e += (m[i][j] && ((b >> j) & 1)) ? 1 : 0;
      }
      out.insert(e);
    }
  }
  return out;
}

inline std::size_t row_degree(const Matrix& m, std::size_t i) {
  std::size_t d = 0;
  for (bool x : m[i]) d += x ? 1 : 0;
  return d;
}

inline std::size_t col_degree(const Matrix& m, std::size_t j) {
  std::size_t d = 0;
  for (const auto& row : m) d += row[j] ? 1 : 0;
  return d;
}

/// |N(u) △ N(v)| for V1 rows.
inline std::size_t brute_div(const Matrix& m, std::size_t u, std::size_t v) {
  std::size_t d = 0;
  for (std::size_t j = 0; j < m[u].size(); ++j) d += (m[u][j] != m[v][j]) ? 1 : 0;
  return d;
}

inline std::size_t sqrt_up(std::size_t n) {
  std::size_t r = 0;
  while (r * r < n) ++r;
  return r;
}

/// Definitional recount of a V1 structure straight from the matrix; empty
/// when every invariant holds.
inline std::vector<std::string> structure_violations(const Matrix& m, const bipsize::PairStructure& s) {
  using bipsize::Vertex;
  std::vector<std::string> bad;
  const std::size_t n2 = m.front().size();
  const std::size_t width = sqrt_up(n2);
  const double eps = s.eps();
  auto deg = [&](Vertex v) { return static_cast<long>(row_degree(m, v)); };
  auto big = [&](std::size_t x) { return static_cast<double>(x) >= eps * static_cast<double>(n2); };
  if (s.is_star()) {
    std::vector<Vertex> all{s.star().root};
    for (auto x : s.star().leaves) all.push_back(x);
    if (std::set<Vertex>(all.begin(), all.end()).size() != all.size()) bad.push_back("repeat");
    for (auto x : s.star().leaves) {
      if (std::labs(deg(x) - deg(s.star().root)) > static_cast<long>(width)) bad.push_back("degree");
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        if (!big(brute_div(m, all[i], all[j]))) bad.push_back("div");
      }
    }
  } else {
    const auto& pairs = s.matching().pairs;
    std::set<Vertex> seen;
    for (const auto& p : pairs) {
      if (!seen.insert(p.u).second || !seen.insert(p.v).second) bad.push_back("overlap");
      const long d = deg(p.u) - deg(p.v);
      if (d < 0 || (d == 0 && p.u > p.v)) bad.push_back("order");
      if (d > static_cast<long>(width)) bad.push_back("gap");
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (i == j) continue;
        for (Vertex z : {pairs[j].u, pairs[j].v}) {
          std::size_t c = 0;
          for (std::size_t b = 0; b < n2; ++b) c += (m[pairs[i].u][b] && !m[pairs[i].v][b] && !m[z][b]) ? 1 : 0;
          if (!big(c)) bad.push_back("spread");
        }
      }
    }
  }
  return bad;
}

}  // namespace testing_support
