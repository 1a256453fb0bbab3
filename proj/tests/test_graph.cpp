#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bipsize/errors.hpp"
#include "bipsize/generators.hpp"
#include "bipsize/graph.hpp"
#include "support.hpp"

using namespace bipsize;
using testing_support::Gen;

namespace {

VertexSet set_of(std::size_t n, std::initializer_list<Vertex> v) {
  return VertexSet::from_indices(n, std::vector<Vertex>(v));
}

BipartiteGraph graph(std::size_t n1, std::size_t n2, std::initializer_list<Edge> e) {
  std::vector<Edge> edges(e);
  return BipartiteGraph::from_edges(n1, n2, edges);
}

}  // namespace

TEST_CASE("vertex sets keep their tail clear") {
  auto full = VertexSet::full(70);
  CHECK(full.count() == 70);
  auto c = full.complement();
  CHECK(c.count() == 0);
  auto s = set_of(70, {0, 5, 69});
  CHECK(s.complement().count() == 67);
  CHECK((s | set_of(70, {1})).count() == 4);
  CHECK((s - set_of(70, {5})).indices() == std::vector<Vertex>{0, 69});
  CHECK(set_of(70, {5}).is_subset_of(s));
}

TEST_CASE("induced edge count examples") {
  const auto k23 = complete_bipartite(2, 3);
  CHECK(induced_edge_count(k23, VertexSet::full(2), VertexSet::full(3)) == 6);
  CHECK(induced_edge_count(k23, VertexSet(2), VertexSet::full(3)) == 0);
  const auto g = graph(2, 2, {{0, 0}, {0, 1}, {1, 1}});
  CHECK(induced_edge_count(g, set_of(2, {0}), set_of(2, {0, 1})) == 2);
}

TEST_CASE("div and divb examples") {
  const auto k22 = complete_bipartite(2, 2);
  CHECK(div(k22, Side::V1, 0, 1).none());
  CHECK(divb(k22, make_ordered_pair(k22, Side::V1, 0, 1)).none());
  const auto g = graph(2, 2, {{0, 0}});
  CHECK(div(g, Side::V1, 0, 1) == set_of(2, {0}));
  const auto h = graph(2, 2, {{0, 0}, {0, 1}});
  const auto p = make_ordered_pair(h, Side::V1, 0, 1);
  CHECK(p.u == 0);
  CHECK(divb(h, p) == set_of(2, {0, 1}));
  CHECK_THROWS_AS(div(g, Side::V1, 1, 1), DegeneratePair);
  CHECK_THROWS_AS(make_ordered_pair(g, Side::V1, 0, 0), DegeneratePair);
}

TEST_CASE("degree_diff examples") {
  const auto g = graph(2, 2, {{0, 0}, {0, 1}, {1, 0}});
  const auto p = make_ordered_pair(g, Side::V1, 0, 1);
  CHECK(degree_diff(g, p, VertexSet(2)) == 0);
  CHECK(degree_diff(g, p, set_of(2, {1})) == 1);
}

TEST_CASE("ordering convention puts the larger degree first, lower index on ties") {
  const auto g = graph(3, 3, {{1, 0}, {1, 1}, {0, 2}, {2, 2}});
  auto p = make_ordered_pair(g, Side::V1, 0, 1);
  CHECK(p.u == 1);
  CHECK(p.v == 0);
  p = make_ordered_pair(g, Side::V1, 2, 0);
  CHECK(p.u == 0);
  CHECK(respects_ordering(g, p));
  CHECK_FALSE(respects_ordering(g, OrderedPair{Side::V1, 0, 1}));
  CHECK_THROWS_AS(divb(g, OrderedPair{Side::V1, 0, 1}), MalformedInput);
}

TEST_CASE("property: counts, divs and degree diffs agree with the matrix oracle") {
  Gen gen(21);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n1 = gen.size(1, 8), n2 = gen.size(1, 8);
    const auto m = gen.matrix(n1, n2, gen.real(0.0, 1.0));
    const auto g = testing_support::from_matrix(m, n2);
    const auto u1 = gen.subset(n1), u2 = gen.subset(n2);
    REQUIRE(induced_edge_count(g, u1, u2) == testing_support::brute_count(m, u1, u2));
    std::size_t sum = 0;
    u1.for_each([&](Vertex x) { sum += g.degree_into(Side::V1, x, u2); });
    CHECK(sum == induced_edge_count(g, u1, u2));
    for (std::size_t i = 0; i < n1; ++i) CHECK(g.degree(Side::V1, static_cast<Vertex>(i)) == testing_support::row_degree(m, i));
    for (std::size_t j = 0; j < n2; ++j) CHECK(g.degree(Side::V2, static_cast<Vertex>(j)) == testing_support::col_degree(m, j));
    if (n1 < 2) continue;
    const auto a = static_cast<Vertex>(gen.size(0, n1 - 1));
    auto b = static_cast<Vertex>(gen.size(0, n1 - 2));
    if (b >= a) ++b;
    CHECK(div_size(g, Side::V1, a, b) == testing_support::brute_div(m, a, b));
    CHECK(div(g, Side::V1, a, b) == div(g, Side::V1, b, a));
    const auto p = make_ordered_pair(g, Side::V1, a, b);
    const auto db = divb(g, p);
    const auto other = g.neighbors(Side::V1, p.v) - g.neighbors(Side::V1, p.u);
    CHECK((db & other).none());
    CHECK((db | other) == div(g, Side::V1, a, b));
    CHECK(db.count() * 2 >= div_size(g, Side::V1, a, b));
    const auto s = gen.subset(n2), t = gen.subset(n2) - s;
    CHECK(degree_diff(g, p, s | t) == degree_diff(g, p, s) + degree_diff(g, p, t));
  }
}

TEST_CASE("transpose rows are consistent with V1 rows") {
  Gen gen(22);
  const auto m = gen.matrix(37, 70, 0.4);
  const auto g = testing_support::from_matrix(m, 70);
  for (std::size_t j = 0; j < 70; ++j) {
    const auto col = g.neighbors(Side::V2, static_cast<Vertex>(j));
    CHECK(col.universe() == 37);
    for (std::size_t i = 0; i < 37; ++i) CHECK(col.test(static_cast<Vertex>(i)) == m[i][j]);
  }
  const auto t = g.transposed();
  CHECK(t.n1() == 70);
  CHECK(t.edge_count() == g.edge_count());
  for (std::size_t i = 0; i < 37; ++i) CHECK(t.adjacent(3, static_cast<Vertex>(i)) == m[i][3]);
  const auto c = g.complement();
  CHECK(c.edge_count() == 37 * 70 - g.edge_count());
}

TEST_CASE("induced relabels both classes") {
  const auto g = graph(3, 3, {{0, 0}, {1, 2}, {2, 1}});
  std::vector<Vertex> k1 = {2, 1}, k2 = {1, 2};
  const auto h = g.induced(k1, k2);
  CHECK(h.n1() == 2);
  CHECK(h.adjacent(0, 0));
  CHECK(h.adjacent(1, 1));
  CHECK(h.edge_count() == 2);
}

TEST_CASE("edge list round trip and malformed input") {
  Gen gen(23);
  const auto g = testing_support::from_matrix(gen.matrix(9, 5, 0.5), 5);
  std::stringstream ss;
  write_edge_list(ss, g);
  const auto h = read_edge_list(ss);
  CHECK(h.n1() == 9);
  CHECK(h.n2() == 5);
  CHECK(h.edges() == g.edges());

  std::stringstream bad1("e 0 0\n");
  CHECK_THROWS_AS(read_edge_list(bad1), MalformedInput);
  std::stringstream bad2("p bip 2 2\ne 0 5\n");
  CHECK_THROWS_AS(read_edge_list(bad2), MalformedInput);
  std::stringstream comment("c hello\np bip 1 1\nc mid\ne 0 0\n");
  CHECK(read_edge_list(comment).edge_count() == 1);
  CHECK_THROWS_AS(BipartiteGraph::from_edges(2, 2, std::vector<Edge>{{2, 0}}), MalformedInput);
  CHECK(parse_side("v2") == Side::V2);
  CHECK_THROWS_AS(parse_side("V3"), MalformedInput);
}

TEST_CASE("generator examples") {
  GeneratorSpec spec;
  spec.model = GraphModel::Complete;
  spec.n1 = spec.n2 = 3;
  CHECK(generate(spec).edge_count() == 9);
  spec.model = GraphModel::Uniform;
  spec.p = 0.0;
  spec.n1 = spec.n2 = 40;
  CHECK(generate(spec).edge_count() == 0);
  spec.model = GraphModel::ComplementOf;
  spec.base = "edgeless";
  CHECK(generate(spec).edge_count() == 1600);
  spec.p = 1.5;
  spec.model = GraphModel::Uniform;
  CHECK_THROWS_AS(generate(spec), ConfigError);
  CHECK_THROWS_AS(parse_model("erdos"), ConfigError);
  CHECK(parse_model("bipartite-uniform") == GraphModel::Uniform);
}

TEST_CASE("uniform model: fixed seed is deterministic and edge counts concentrate") {
  CHECK(random_bipartite(64, 64, 0.5, 7).edges() == random_bipartite(64, 64, 0.5, 7).edges());
  const double sigma = std::sqrt(4096 * 0.25);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = static_cast<double>(random_bipartite(64, 64, 0.5, seed).edge_count());
    CHECK(std::abs(e - 2048.0) <= 4 * sigma);
  }
}

TEST_CASE("ceil_sqrt") {
  CHECK(ceil_sqrt(0) == 0);
  CHECK(ceil_sqrt(1) == 1);
  CHECK(ceil_sqrt(2) == 2);
  CHECK(ceil_sqrt(64) == 8);
  CHECK(ceil_sqrt(65) == 9);
  CHECK(ceil_sqrt(256) == 16);
}
