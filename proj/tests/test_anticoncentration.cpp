#include <doctest.h>

#include <cmath>
#include <map>

#include "bipsize/anticoncentration.hpp"
#include "bipsize/generators.hpp"
#include "bipsize/ramsey_metrics.hpp"
#include "support.hpp"

using namespace bipsize;
using testing_support::Gen;

namespace {

double binom(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Every outcome of the independent Bernoulli vector.
std::map<std::int64_t, double> enumerate_law(const std::vector<std::int64_t>& w, const std::vector<double>& p) {
  std::map<std::int64_t, double> law;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w.size()); ++mask) {
    double pr = 1.0;
    std::int64_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool on = (mask >> i) & 1;
      pr *= on ? p[i] : 1.0 - p[i];
      if (on) s += w[i];
    }
    law[s] += pr;
  }
  return law;
}

}  // namespace

TEST_CASE("point probability examples") {
  const std::vector<double> half1 = {0.5}, half2 = {0.5, 0.5}, half4 = {0.5, 0.5, 0.5, 0.5};
  CHECK(max_point_probability(std::vector<std::int64_t>{1}, half1) == 0.5);
  CHECK(max_point_probability(std::vector<std::int64_t>{1, 1, 1, 1}, half4) == 0.375);
  const std::vector<std::int64_t> pm = {1, -1};
  CHECK(max_point_probability(pm, half2) == 0.5);
  CHECK(point_probability(pm, half2, 0) == 0.5);
  CHECK(point_probability(pm, half2, 1) == 0.25);
  CHECK(point_probability(pm, half2, 7) == 0.0);
}

TEST_CASE("property: point distribution matches outcome enumeration") {
  Gen gen(51);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = gen.size(1, 12);
    std::vector<std::int64_t> w(n);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      do {
        w[i] = gen.integer(-6, 6);
      } while (w[i] == 0);
      p[i] = gen.real(0.0, 1.0);
    }
    const auto law = enumerate_law(w, p);
    const auto dist = point_distribution(w, p);
    double mx = 0;
    for (auto [x, pr] : law) {
      CHECK(dist.at(x) == doctest::Approx(pr).epsilon(1e-12));
      mx = std::max(mx, pr);
    }
    CHECK(dist.max() == doctest::Approx(mx).epsilon(1e-12));
  }
}

TEST_CASE("central binomial for +-1 weights") {
  Gen gen(52);
  for (unsigned n = 2; n <= 20; n += 2) {
    std::vector<std::int64_t> w(n);
    for (auto& x : w) x = gen.coin() ? 1 : -1;
    const std::vector<double> p(n, 0.5);
    const double expect = binom(n, n / 2) / std::ldexp(1.0, static_cast<int>(n));
    CHECK(max_point_probability(w, p) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("support budget") {
  const std::vector<std::int64_t> w = {1 << 20, 1 << 21, 1 << 22};
  const std::vector<double> p(3, 0.5);
  CHECK_THROWS_AS(max_point_probability(w, p, 1000), BudgetExceeded);
  CHECK_THROWS(max_point_probability(std::vector<std::int64_t>{}, std::vector<double>{}));
}

TEST_CASE("modular law examples") {
  auto d = binomial_mod_distribution(2, 2);
  CHECK(d.fraction(0) == "1/2");
  CHECK(d.fraction(1) == "1/2");
  d = binomial_mod_distribution(3, 3);
  CHECK(d.fraction(0) == "1/4");
  CHECK(d.counts[0] == 2);
  CHECK(d.within_bounds());
  d = binomial_mod_distribution(100, 5);
  CHECK(d.within_bounds());
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(d.probability(k) >= 1.0 / 6);
    CHECK(d.probability(k) <= 1.0 / 4);
  }
  CHECK_THROWS_AS(binomial_mod_distribution(5, 1), ConfigError);
}

TEST_CASE("modular law counts match subset enumeration") {
  for (std::size_t n = 0; n <= 14; ++n) {
    for (std::size_t m = 2; m <= 6; ++m) {
      std::vector<std::uint64_t> count(m, 0);
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) ++count[static_cast<std::size_t>(__builtin_popcountll(s)) % m];
      const auto d = binomial_mod_distribution(n, m);
      CHECK(d.sums_to_one());
      for (std::size_t k = 0; k < m; ++k) CHECK(d.counts[k] == count[k]);
    }
  }
}

TEST_CASE("parity is exact and thresholds are small") {
  for (std::size_t n = 1; n <= 200; ++n) {
    const auto d = binomial_mod_distribution(n, 2);
    CHECK(d.counts[0] == d.counts[1]);
  }
  for (std::size_t m = 2; m <= 6; ++m) {
    const auto t = empirical_threshold(m, 200);
    REQUIRE(t.has_value());
    CHECK(*t <= 50);
    MESSAGE("bounds hold from n = " << *t << " for d = " << m);
  }
}

TEST_CASE("sample_W") {
  CHECK(sample_W(0, 1).universe() == 0);
  CHECK(sample_W(100, 9) == sample_W(100, 9));
  CHECK_FALSE(sample_W(100, 9) == sample_W(100, 10));
  Rng rng(3);
  double total = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto w = sample_W(64, rng);
    CHECK(w.universe() == 64);
    total += static_cast<double>(w.count());
  }
  const double mean = total / 10000;
  CHECK(std::abs(mean - 32.0) <= 3 * std::sqrt(16.0 / 10000));
  const auto odd = sample_W(70, 4);
  CHECK(odd.complement().count() + odd.count() == 70);
}

TEST_CASE("degree shift examples") {
  // Leaf 1 sees b = 3 on top of the root's neighbourhood.
  std::vector<Edge> e = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 3}};
  const auto g = BipartiteGraph::from_edges(2, 4, e);
  const PairStructure s(PairStar{Side::V1, 0, {1}, 0.1});
  const auto none = degree_shift_set(g, s, VertexSet(4));
  CHECK(none.values() == std::vector<std::int64_t>{0});
  const auto one = degree_shift_set(g, s, VertexSet::from_indices(4, std::vector<Vertex>{3}));
  CHECK(one.realizers.count(1) == 1);
  CHECK(verify_degree_shift_set(g, s, VertexSet::from_indices(4, std::vector<Vertex>{3}), one));
}

TEST_CASE("property: shift values recount from their realizers") {
  const auto g = random_bipartite(256, 256, 0.5, 0);
  const auto m = testing_support::to_matrix(g);
  const auto fam = extract_disjoint_family(g, Side::V1, 0.01, 16, 3, VertexSet(256), 0);
  Gen gen(53);
  for (int iter = 0; iter < 20; ++iter) {
    const auto w = gen.subset(256);
    for (const auto& s : fam) {
      const auto a = degree_shift_set(g, s, w);
      CHECK(verify_degree_shift_set(g, s, w, a));
      CHECK(a.clip == 48);
      for (auto [value, idx] : a.realizers) {
        CHECK(std::llabs(value) <= 48);
        Vertex x, y;
        if (s.is_star()) {
          x = s.star().leaves[idx - 1];
          y = s.star().root;
        } else {
          x = s.matching().pairs[idx].u;
          y = s.matching().pairs[idx].v;
        }
        std::int64_t dx = 0, dy = 0;
        for (std::size_t b = 0; b < 256; ++b) {
          if (!testing_support::in(w, b)) continue;
          dx += m[x][b];
          dy += m[y][b];
        }
        CHECK(value == dx - dy);
        // The swap changes e(G[head, W]) by the edit delta.
        VertexSet cur(256);
        for (auto h : s.head()) cur.insert(h);
        const auto before = testing_support::brute_count(m, cur, w);
        apply_swap(s, idx, cur);
        const auto after = testing_support::brute_count(m, cur, w);
        CHECK(static_cast<std::int64_t>(after) - static_cast<std::int64_t>(before) == a.edit_delta(value));
      }
    }
  }
}

TEST_CASE("collision examples") {
  std::vector<Edge> same = {{0, 0}, {0, 2}, {1, 0}, {1, 2}};
  const auto g = BipartiteGraph::from_edges(2, 4, same);
  CHECK(collision_probability_estimate(g, Side::V1, 0, 1, 1000, 1).estimate == 1.0);
  CHECK(exact_collision_probability(g, Side::V1, 0, 1) == 1.0);

  // Complementary rows over 64 columns.
  std::vector<Edge> comp;
  for (Vertex j = 0; j < 64; ++j) comp.emplace_back(j < 32 ? 0 : 1, j);
  const auto h = BipartiteGraph::from_edges(2, 64, comp);
  const auto est = collision_probability_estimate(h, Side::V1, 0, 1, 10000, 2);
  const double exact = exact_collision_probability(h, Side::V1, 0, 1);
  CHECK(exact == doctest::Approx(binom(64, 32) / std::ldexp(1.0, 64)).epsilon(1e-12));
  CHECK(std::abs(est.estimate - exact) <= 4 * std::sqrt(exact * (1 - exact) / 10000));
  CHECK(est.estimate <= 5.0 / 8.0);
  CHECK(est.radius == doctest::Approx(1.96 * std::sqrt(est.estimate * (1 - est.estimate) / 10000)));
}

TEST_CASE("matching-pair collisions agree with the exact law") {
  const auto g = random_bipartite(8, 64, 0.5, 11);
  for (Vertex a = 0; a + 3 < 8; a += 4) {
    const auto p = make_ordered_pair(g, Side::V1, a, a + 1);
    const auto q = make_ordered_pair(g, Side::V1, a + 2, a + 3);
    const double exact = exact_collision_probability(g, p, q);
    const auto est = collision_probability_estimate(g, p, q, 20000, a);
    CHECK(std::abs(est.estimate - exact) <= 4 * std::sqrt(exact * (1 - exact) / 20000) + 1e-12);
  }
}

TEST_CASE("residue coverage recounts") {
  const auto g = random_bipartite(32, 64, 0.5, 12);
  std::vector<Vertex> vs = {0, 3, 5, 7, 9, 11, 13, 17};
  Gen gen(54);
  for (int iter = 0; iter < 20; ++iter) {
    const auto w = gen.subset(64);
    const auto cov = residue_coverage(g, vs, w, 6);
    CHECK(verify_residue_coverage(g, vs, w, cov));
    for (auto [key, idx] : cov.table) {
      std::size_t deg = 0;
      w.for_each([&](Vertex b) { deg += g.adjacent(vs[idx], b); });
      CHECK(deg % key.second == key.first);
    }
    std::size_t total = 0;
    for (std::size_t m = 2; m <= 6; ++m) total += m;
    CHECK(cov.table.size() + cov.missing() == total);
  }
}

TEST_CASE("good W search") {
  const auto g = random_bipartite(64, 64, 0.5, 13);
  const auto fam = extract_disjoint_family(g, Side::V1, 0.05, 4, 1, VertexSet(64), 13);
  VertexSet rest = VertexSet::full(64);
  for (auto v : fam.front().vertices()) rest.reset(v);

  PrivateSeqOptions po;
  po.candidates = rest;
  const auto s2 = find_private_neighborhood_seq(g, 3, 8, po);
  GoodWOptions o;
  o.d_max = 2;
  o.delta = 0.1;
  o.seed = 5;
  const auto good = good_W_search(g, fam, s2, o);
  CHECK(good.attempts <= 8);
  CHECK(good.coverage.complete());
  CHECK(verify_residue_coverage(g, s2.vertices, good.w, good.coverage));
  CHECK(verify_degree_shift_set(g, fam.front(), good.w, good.shifts.front()));

  // No residue source: every attempt fails E2.
  o.max_attempts = 10;
  o.delta = 0.0;
  try {
    good_W_search(g, fam, PrivateNeighborhoodSeq{}, o);
    FAIL("expected failure");
  } catch (const SearchFailure& e) {
    CHECK(e.attempts() == 10);
    CHECK(e.e2_failures() == 10);
    CHECK(e.e1_failures() == 0);
  }
}
