#include "bipsize/structures.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "bipsize/kernels.hpp"
#include "bipsize/rng.hpp"

namespace bipsize {

Side PairStructure::side() const {
  return is_star() ? star().side : matching().side;
}

double PairStructure::eps() const { return is_star() ? star().eps : matching().eps; }

std::size_t PairStructure::size() const {
  return is_star() ? star().leaves.size() : matching().pairs.size();
}

std::vector<Vertex> PairStructure::head() const {
  if (is_star()) return {star().root};
  std::vector<Vertex> out;
  for (const auto& p : matching().pairs) out.push_back(p.u);
  return out;
}

std::vector<Vertex> PairStructure::vertices() const {
  std::vector<Vertex> out;
  if (is_star()) {
    out.push_back(star().root);
    out.insert(out.end(), star().leaves.begin(), star().leaves.end());
  } else {
    for (const auto& p : matching().pairs) {
      out.push_back(p.u);
      out.push_back(p.v);
    }
  }
  return out;
}

namespace {

bool at_least(std::size_t count, double eps, std::size_t n) {
  return static_cast<double>(count) >= eps * static_cast<double>(n);
}

// |N(a) \ N(b) \ N(c)|
std::size_t andnot2(const BipartiteGraph& g, Side side, Vertex a, Vertex b, Vertex c) {
  auto ra = g.row(side, a);
  return static_cast<std::size_t>(kernels::active().popcount_andnot2(
      ra.data(), g.row(side, b).data(), g.row(side, c).data(), ra.size()));
}

// Any of the four cross conditions between two ordered pairs fails.
bool matching_conflict(const BipartiteGraph& g, const OrderedPair& p, const OrderedPair& q, double eps) {
  const std::size_t n = g.size(opposite(p.side));
  return !at_least(andnot2(g, p.side, p.u, p.v, q.u), eps, n) ||
         !at_least(andnot2(g, p.side, p.u, p.v, q.v), eps, n) ||
         !at_least(andnot2(g, p.side, q.u, q.v, p.u), eps, n) ||
         !at_least(andnot2(g, p.side, q.u, q.v, p.v), eps, n);
}

}  // namespace

std::vector<std::string> structure_violations(const BipartiteGraph& g, const PairStructure& s) {
  std::vector<std::string> out;
  const Side side = s.side();
  const std::size_t n_side = g.size(side);
  const std::size_t n_opp = g.size(opposite(side));
  const std::size_t width = ceil_sqrt(n_opp);
  const double eps = s.eps();
  auto name = [](Vertex v) { return std::to_string(v); };

  auto vs = s.vertices();
  for (Vertex v : vs) {
    if (v >= n_side) {
      out.push_back("vertex " + name(v) + " out of range");
      return out;
    }
  }
  std::set<Vertex> distinct(vs.begin(), vs.end());
  if (distinct.size() != vs.size()) out.push_back("vertices are not distinct");

  if (s.is_star()) {
    const auto& st = s.star();
    const auto d0 = static_cast<std::int64_t>(g.degree(side, st.root));
    std::vector<Vertex> all{st.root};
    all.insert(all.end(), st.leaves.begin(), st.leaves.end());
    for (Vertex x : st.leaves) {
      const auto dx = static_cast<std::int64_t>(g.degree(side, x));
      if (static_cast<std::size_t>(std::abs(dx - d0)) > width) {
        out.push_back("leaf " + name(x) + " degree differs from root by more than " + std::to_string(width));
      }
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        if (all[i] == all[j]) continue;
        if (!at_least(div_size(g, side, all[i], all[j]), eps, n_opp)) {
          out.push_back("div(" + name(all[i]) + ", " + name(all[j]) + ") below eps");
        }
      }
    }
  } else {
    const auto& pairs = s.matching().pairs;
    for (const auto& p : pairs) {
      if (p.side != side) out.push_back("pair on the wrong side");
      if (p.u == p.v || !respects_ordering(g, p)) {
        out.push_back("pair (" + name(p.u) + ", " + name(p.v) + ") violates the ordering convention");
        continue;
      }
      const auto diff = static_cast<std::int64_t>(g.degree(side, p.u)) -
                        static_cast<std::int64_t>(g.degree(side, p.v));
      if (diff > static_cast<std::int64_t>(width)) {
        out.push_back("pair (" + name(p.u) + ", " + name(p.v) + ") degree gap above " + std::to_string(width));
      }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (i == j) continue;
        const auto& p = pairs[i];
        const auto& q = pairs[j];
        if (p.u == p.v || q.u == q.v) continue;
        if (!at_least(andnot2(g, side, p.u, p.v, q.u), eps, n_opp) ||
            !at_least(andnot2(g, side, p.u, p.v, q.v), eps, n_opp)) {
          out.push_back("divb of pair " + std::to_string(i) + " not spread against pair " + std::to_string(j));
        }
      }
    }
  }
  return out;
}

nlohmann::json to_json(const PairStructure& s) {
  nlohmann::json j;
  j["kind"] = s.kind();
  j["side"] = side_name(s.side());
  j["eps"] = s.eps();
  if (s.is_star()) {
    j["root"] = s.star().root;
    j["leaves"] = s.star().leaves;
  } else {
    auto pairs = nlohmann::json::array();
    for (const auto& p : s.matching().pairs) pairs.push_back({p.u, p.v});
    j["pairs"] = pairs;
  }
  return j;
}

PairStructure structure_from_json(const nlohmann::json& j) {
  try {
    const Side side = parse_side(j.at("side").get<std::string>());
    const double eps = j.at("eps").get<double>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "star") {
      return PairStar{side, j.at("root").get<Vertex>(), j.at("leaves").get<std::vector<Vertex>>(), eps};
    }
    if (kind == "matching") {
      PairMatching m{side, {}, eps};
      for (const auto& p : j.at("pairs")) m.pairs.push_back({side, p.at(0).get<Vertex>(), p.at(1).get<Vertex>()});
      return m;
    }
    throw MalformedInput("unknown structure kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("structure json: ") + e.what());
  }
}

ExtractionFailure::ExtractionFailure(std::size_t achieved, std::size_t target)
    : Error("pair structure extraction reached size " + std::to_string(achieved) + " of " +
            std::to_string(target)),
      achieved_(achieved),
      target_(target) {}

FamilyExtractionFailure::FamilyExtractionFailure(std::vector<PairStructure> partial,
                                                 std::size_t family_size, std::size_t inner_achieved)
    : ExtractionFailure(partial.size(), family_size),
      partial_(std::move(partial)),
      inner_achieved_(inner_achieved) {}

std::vector<std::size_t> min_conflict_greedy(std::size_t count,
                                             const std::function<bool(std::size_t, std::size_t)>& conflict,
                                             std::size_t explicit_limit) {
  std::vector<std::vector<bool>> matrix;
  const bool explicit_graph = count <= explicit_limit;
  if (explicit_graph) {
    matrix.assign(count, std::vector<bool>(count, false));
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) matrix[i][j] = matrix[j][i] = conflict(i, j);
    }
  }
  auto clash = [&](std::size_t i, std::size_t j) { return explicit_graph ? bool(matrix[i][j]) : conflict(i, j); };

  std::vector<bool> live(count, true);
  std::vector<std::size_t> degree(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (clash(i, j)) {
        ++degree[i];
        ++degree[j];
      }
    }
  }
  std::vector<std::size_t> kept;
  while (true) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < count; ++i) {
      if (live[i] && (!best || degree[i] < degree[*best])) best = i;
    }
    if (!best) break;
    kept.push_back(*best);
    live[*best] = false;
    std::vector<std::size_t> victims;
    for (std::size_t j = 0; j < count; ++j) {
      if (live[j] && clash(*best, j)) victims.push_back(j);
    }
    for (auto v : victims) live[v] = false;
    for (auto v : victims) {
      for (std::size_t j = 0; j < count; ++j) {
        if (live[j] && clash(v, j)) --degree[j];
      }
    }
  }
  return kept;
}

std::optional<StarOrMatching> find_star_or_matching(std::size_t vertex_count,
                                                    const std::vector<std::pair<Vertex, Vertex>>& edges,
                                                    std::size_t m) {
  std::vector<std::vector<std::size_t>> incident(vertex_count);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    if (a >= vertex_count || b >= vertex_count || a == b) throw MalformedInput("bad auxiliary edge");
    incident[a].push_back(e);
    incident[b].push_back(e);
  }
  Vertex center = 0;
  for (Vertex v = 1; v < vertex_count; ++v) {
    if (incident[v].size() > incident[center].size()) center = v;
  }
  if (vertex_count > 0 && incident[center].size() >= m + 1) {
    StarOrMatching out{true, center, {}};
    out.edges.assign(incident[center].begin(), incident[center].begin() + static_cast<std::ptrdiff_t>(m + 1));
    return out;
  }
  std::vector<bool> covered(vertex_count, false);
  StarOrMatching out{false, 0, {}};
  for (std::size_t e = 0; e < edges.size() && out.edges.size() < m; ++e) {
    const auto [a, b] = edges[e];
    if (covered[a] || covered[b]) continue;
    covered[a] = covered[b] = true;
    out.edges.push_back(e);
  }
  if (out.edges.size() >= m) return out;
  return std::nullopt;
}

PairStructure extract_pair_structure(const BipartiteGraph& g, Side side, double eps,
                                     std::size_t target_size, std::uint64_t seed,
                                     const ExtractOptions& options) {
  if (target_size == 0) throw ConfigError("target_size must be at least 1");
  if (!(eps >= 0.0)) throw ConfigError("eps must be non-negative");
  const std::size_t n_side = g.size(side);
  const std::size_t n_opp = g.size(opposite(side));
  const std::size_t width = std::max<std::size_t>(1, ceil_sqrt(n_opp));
  const double eps0 = options.eps0.value_or(eps);
  if (options.allowed && options.allowed->universe() != n_side) {
    throw MalformedInput("allowed mask does not match the class size");
  }
  Rng rng(seed);

  // Degree buckets of width ceil(sqrt(n_opp)).
  std::vector<std::vector<Vertex>> buckets(n_opp / width + 1);
  for (Vertex v = 0; v < n_side; ++v) {
    if (options.allowed && !options.allowed->test(v)) continue;
    buckets[g.degree(side, v) / width].push_back(v);
  }

  std::vector<std::pair<Vertex, Vertex>> s0;
  std::vector<std::vector<Vertex>> h_adj(n_side);
  for (const auto& bucket : buckets) {
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      for (std::size_t j = i + 1; j < bucket.size(); ++j) {
        if (at_least(div_size(g, side, bucket[i], bucket[j]), eps0, n_opp)) {
          s0.emplace_back(bucket[i], bucket[j]);
          h_adj[bucket[i]].push_back(bucket[j]);
          h_adj[bucket[j]].push_back(bucket[i]);
        }
      }
    }
  }
  if (s0.empty()) throw ExtractionFailure(0, target_size);

  std::size_t best_achieved = 0;
  auto finish = [&](PairStructure s) {
    auto bad = structure_violations(g, s);
    if (!bad.empty()) throw Error("extracted structure failed re-verification: " + bad.front());
    return s;
  };

  // Star branch: roots by auxiliary degree, seeded order among ties.
  std::vector<Vertex> roots;
  for (Vertex v = 0; v < n_side; ++v) {
    if (h_adj[v].size() >= 1) roots.push_back(v);
  }
  rng.shuffle(std::span<Vertex>(roots));
  std::stable_sort(roots.begin(), roots.end(),
                   [&](Vertex a, Vertex b) { return h_adj[a].size() > h_adj[b].size(); });
  const std::size_t root_count = std::min(roots.size(), options.max_roots);
  for (std::size_t r = 0; r < root_count; ++r) {
    const Vertex root = roots[r];
    if (h_adj[root].size() < std::max(target_size, best_achieved + 1)) break;
    std::vector<Vertex> leaves;
    for (Vertex x : h_adj[root]) {
      if (at_least(div_size(g, side, root, x), eps, n_opp)) leaves.push_back(x);
    }
    std::sort(leaves.begin(), leaves.end());
    auto kept = min_conflict_greedy(
        leaves.size(),
        [&](std::size_t i, std::size_t j) { return !at_least(div_size(g, side, leaves[i], leaves[j]), eps, n_opp); },
        options.explicit_conflict_limit);
    best_achieved = std::max(best_achieved, kept.size());
    if (kept.size() >= target_size) {
      PairStar star{side, root, {}, eps};
      for (std::size_t i = 0; i < target_size; ++i) star.leaves.push_back(leaves[kept[i]]);
      return finish(std::move(star));
    }
  }

  // Matching branch: greedy maximal matching over S0 in seeded order.
  std::vector<std::size_t> order(s0.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<bool> used(n_side, false);
  std::vector<OrderedPair> pairs;
  for (auto e : order) {
    const auto [a, b] = s0[e];
    if (used[a] || used[b]) continue;
    used[a] = used[b] = true;
    pairs.push_back(make_ordered_pair(g, side, a, b));
  }
  auto kept = min_conflict_greedy(
      pairs.size(), [&](std::size_t i, std::size_t j) { return matching_conflict(g, pairs[i], pairs[j], eps); },
      options.explicit_conflict_limit);
  best_achieved = std::max(best_achieved, kept.size());
  if (kept.size() >= target_size) {
    PairMatching m{side, {}, eps};
    for (std::size_t i = 0; i < target_size; ++i) m.pairs.push_back(pairs[kept[i]]);
    return finish(std::move(m));
  }
  throw ExtractionFailure(best_achieved, target_size);
}

std::vector<PairStructure> extract_disjoint_family(const BipartiteGraph& g, Side side, double eps,
                                                   std::size_t per_structure_size,
                                                   std::size_t family_size,
                                                   const VertexSet& forbidden, std::uint64_t seed,
                                                   const ExtractOptions& options) {
  if (family_size == 0) throw ConfigError("family_size must be at least 1");
  if (forbidden.universe() != g.size(side)) throw MalformedInput("forbidden mask does not match the class size");
  VertexSet allowed = forbidden.complement();
  if (options.allowed) allowed &= *options.allowed;
  std::vector<PairStructure> family;
  for (std::size_t i = 0; i < family_size; ++i) {
    ExtractOptions local = options;
    local.allowed = allowed;
    try {
      family.push_back(extract_pair_structure(g, side, eps, per_structure_size, derive_seed(seed, i), local));
    } catch (const ExtractionFailure& e) {
      throw FamilyExtractionFailure(std::move(family), family_size, e.achieved());
    }
    for (Vertex v : family.back().vertices()) allowed.reset(v);
  }
  return family;
}

}  // namespace bipsize
