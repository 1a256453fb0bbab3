#include "bipsize/anticoncentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <boost/multiprecision/cpp_int.hpp>

#include "bipsize/kernels.hpp"

namespace bipsize {

namespace mp = boost::multiprecision;

double PointDistribution::at(std::int64_t x) const {
  if (x < offset) return 0.0;
  const auto k = static_cast<std::uint64_t>(x - offset);
  return k < mass.size() ? mass[k] : 0.0;
}

double PointDistribution::max() const {
  return mass.empty() ? 0.0 : *std::max_element(mass.begin(), mass.end());
}

PointDistribution point_distribution(std::span<const std::int64_t> weights, std::span<const double> probs,
                                     std::size_t support_budget) {
  if (weights.size() != probs.size()) throw MalformedInput("weights and probabilities differ in length");
  std::size_t width = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0) throw MalformedInput("weights must be nonzero");
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) throw MalformedInput("probabilities must lie in [0, 1]");
    width += static_cast<std::size_t>(std::llabs(weights[i]));
    if (width > support_budget) {
      throw BudgetExceeded("support width exceeds budget of " + std::to_string(support_budget));
    }
  }
  const auto& k = kernels::active();
  PointDistribution dist;
  std::vector<double> cur(width + 1, 0.0);
  std::vector<double> next(width + 1, 0.0);
  cur[0] = 1.0;
  std::size_t len = 1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto shift = static_cast<std::size_t>(std::llabs(weights[i]));
    const double p = probs[i];
    // Index k stands for value offset + k. A negative weight moves the
    // offset down so the untaken branch is the one that shifts right.
    if (weights[i] > 0) {
      k.blend_shifted(next.data(), cur.data(), len + shift, shift, 1.0 - p, p);
    } else {
      k.blend_shifted(next.data(), cur.data(), len + shift, shift, p, 1.0 - p);
      dist.offset += weights[i];
    }
    len += shift;
    std::swap(cur, next);
  }
  cur.resize(len);
  dist.mass = std::move(cur);
  return dist;
}

double max_point_probability(std::span<const std::int64_t> weights, std::span<const double> probs,
                             std::size_t support_budget) {
  if (weights.empty()) throw MalformedInput("weights must be nonempty");
  return point_distribution(weights, probs, support_budget).max();
}

double point_probability(std::span<const std::int64_t> weights, std::span<const double> probs, std::int64_t x,
                         std::size_t support_budget) {
  return point_distribution(weights, probs, support_budget).at(x);
}

double ModDistribution::probability(std::size_t k) const {
  return mp::cpp_rational(counts.at(k), total).convert_to<double>();
}

std::string ModDistribution::fraction(std::size_t k) const {
  const mp::cpp_rational r(counts.at(k), total);
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

bool ModDistribution::within_bounds() const {
  for (const auto& c : counts) {
    if (BigInt(d + 1) * c < total) return false;
    if (BigInt(d - 1) * c > total) return false;
  }
  return true;
}

bool ModDistribution::sums_to_one() const {
  BigInt sum = 0;
  for (const auto& c : counts) sum += c;
  return sum == total;
}

ModDistribution binomial_mod_distribution(std::size_t n, std::size_t d) {
  if (d < 2) throw ConfigError("modulus must be at least 2");
  ModDistribution out;
  out.n = n;
  out.d = d;
  out.counts.assign(d, BigInt(0));
  out.counts[0] = 1;
  std::vector<BigInt> next(d);
  for (std::size_t step = 0; step < n; ++step) {
    for (std::size_t r = 0; r < d; ++r) next[r] = out.counts[r] + out.counts[(r + d - 1) % d];
    std::swap(out.counts, next);
  }
  out.total = BigInt(1) << n;
  return out;
}

std::optional<std::size_t> empirical_threshold(std::size_t d, std::size_t n_max) {
  std::optional<std::size_t> last_bad;
  ModDistribution dist = binomial_mod_distribution(0, d);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) {
      std::vector<BigInt> next(d);
      for (std::size_t r = 0; r < d; ++r) next[r] = dist.counts[r] + dist.counts[(r + d - 1) % d];
      dist.counts = std::move(next);
      dist.total <<= 1;
      dist.n = n;
    }
    if (!dist.within_bounds()) last_bad = n;
  }
  if (!last_bad) return 0;
  if (*last_bad == n_max) return std::nullopt;
  return *last_bad + 1;
}

VertexSet sample_W(std::size_t n, Rng& rng) {
  std::vector<std::uint64_t> words(words_for(n));
  for (auto& w : words) w = rng.next();
  return VertexSet::from_words(n, words);
}

VertexSet sample_W(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_W(n, rng);
}

std::vector<std::int64_t> DegreeShiftSet::values() const {
  std::vector<std::int64_t> out;
  for (const auto& [v, r] : realizers) out.push_back(v);
  return out;
}

std::vector<std::int64_t> DegreeShiftSet::edit_deltas() const {
  std::vector<std::int64_t> out;
  for (const auto& [v, r] : realizers) out.push_back(edit_delta(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t shift_of(const BipartiteGraph& g, const PairStructure& s, std::size_t index, const VertexSet& w) {
  const Side side = s.side();
  auto deg = [&](Vertex v) { return static_cast<std::int64_t>(g.degree_into(side, v, w)); };
  if (s.is_star()) {
    const auto& st = s.star();
    if (index == 0 || index > st.leaves.size()) throw MalformedInput("star realizer out of range");
    return deg(st.leaves[index - 1]) - deg(st.root);
  }
  const auto& pairs = s.matching().pairs;
  if (index >= pairs.size()) throw MalformedInput("matching realizer out of range");
  return deg(pairs[index].u) - deg(pairs[index].v);
}

DegreeShiftSet degree_shift_set(const BipartiteGraph& g, const PairStructure& s, const VertexSet& w,
                                std::size_t structure_id) {
  const std::size_t n_opp = g.size(opposite(s.side()));
  if (w.universe() != n_opp) throw MalformedInput("W does not live in the structure's opposite class");
  DegreeShiftSet out;
  out.structure_id = structure_id;
  out.clip = 3 * static_cast<std::int64_t>(ceil_sqrt(n_opp));
  out.edit_sign = s.is_star() ? 1 : -1;
  const std::size_t first = s.is_star() ? 1 : 0;
  const std::size_t last = s.is_star() ? s.size() : s.size() - 1;
  for (std::size_t i = first; s.size() > 0 && i <= last; ++i) {
    const std::int64_t v = shift_of(g, s, i, w);
    if (std::llabs(v) <= out.clip) out.realizers.emplace(v, i);
  }
  return out;
}

bool verify_degree_shift_set(const BipartiteGraph& g, const PairStructure& s, const VertexSet& w,
                             const DegreeShiftSet& a) {
  const std::int64_t clip = 3 * static_cast<std::int64_t>(ceil_sqrt(g.size(opposite(s.side()))));
  if (a.clip != clip || a.edit_sign != (s.is_star() ? 1 : -1)) return false;
  for (const auto& [value, index] : a.realizers) {
    if (std::llabs(value) > clip) return false;
    try {
      if (shift_of(g, s, index, w) != value) return false;
    } catch (const MalformedInput&) {
      return false;
    }
  }
  return true;
}

void apply_swap(const PairStructure& s, std::size_t index, VertexSet& current) {
  if (s.is_star()) {
    const auto& st = s.star();
    if (index == 0 || index > st.leaves.size()) throw MalformedInput("star realizer out of range");
    current.reset(st.root);
    current.set(st.leaves[index - 1]);
  } else {
    const auto& pairs = s.matching().pairs;
    if (index >= pairs.size()) throw MalformedInput("matching realizer out of range");
    current.reset(pairs[index].u);
    current.set(pairs[index].v);
  }
}

namespace {

CollisionEstimate finish_estimate(std::size_t hits, std::size_t trials) {
  CollisionEstimate out;
  out.trials = trials;
  out.hits = hits;
  out.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  out.radius = 1.96 * std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

// Monte Carlo over W of sum_j sign_j * |row_j ∩ W| == 0.
CollisionEstimate estimate_zero(const std::vector<std::pair<std::span<const std::uint64_t>, int>>& rows,
                                std::size_t n_opp, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  const auto& k = kernels::active();
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const VertexSet w = sample_W(n_opp, rng);
    std::int64_t total = 0;
    for (const auto& [row, sign] : rows) {
      total += sign * static_cast<std::int64_t>(k.popcount_and(row.data(), w.words().data(), row.size()));
    }
    if (total == 0) ++hits;
  }
  return finish_estimate(hits, trials);
}

double exact_zero(const BipartiteGraph& g, Side side, const std::vector<std::pair<Vertex, int>>& terms) {
  const std::size_t n_opp = g.size(opposite(side));
  std::vector<std::int64_t> weights;
  for (Vertex b = 0; b < n_opp; ++b) {
    std::int64_t theta = 0;
    for (const auto& [v, sign] : terms) {
      const bool edge = side == Side::V1 ? g.adjacent(v, b) : g.adjacent(b, v);
      if (edge) theta += sign;
    }
    if (theta != 0) weights.push_back(theta);
  }
  if (weights.empty()) return 1.0;
  std::vector<double> probs(weights.size(), 0.5);
  return point_probability(weights, probs, 0);
}

}  // namespace

CollisionEstimate collision_probability_estimate(const BipartiteGraph& g, Side side, Vertex x, Vertex y,
                                                 std::size_t trials, std::uint64_t seed) {
  return estimate_zero({{g.row(side, x), 1}, {g.row(side, y), -1}}, g.size(opposite(side)), trials, seed);
}

CollisionEstimate collision_probability_estimate(const BipartiteGraph& g, const OrderedPair& p,
                                                 const OrderedPair& q, std::size_t trials,
                                                 std::uint64_t seed) {
  if (p.side != q.side) throw MalformedInput("pairs live on different sides");
  const Side s = p.side;
  return estimate_zero({{g.row(s, p.u), 1}, {g.row(s, p.v), -1}, {g.row(s, q.u), -1}, {g.row(s, q.v), 1}},
                       g.size(opposite(s)), trials, seed);
}

double exact_collision_probability(const BipartiteGraph& g, Side side, Vertex x, Vertex y) {
  return exact_zero(g, side, {{x, 1}, {y, -1}});
}

double exact_collision_probability(const BipartiteGraph& g, const OrderedPair& p, const OrderedPair& q) {
  if (p.side != q.side) throw MalformedInput("pairs live on different sides");
  return exact_zero(g, p.side, {{p.u, 1}, {p.v, -1}, {q.u, -1}, {q.v, 1}});
}

std::size_t ResidueCoverage::missing() const {
  std::size_t miss = 0;
  for (std::size_t m = 2; m <= d_max; ++m) {
    for (std::size_t k = 0; k < m; ++k) {
      if (!table.count({k, m})) ++miss;
    }
  }
  return miss;
}

std::optional<std::size_t> ResidueCoverage::find(std::size_t k, std::size_t m) const {
  auto it = table.find({k % m, m});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

ResidueCoverage residue_coverage(const BipartiteGraph& g, std::span<const Vertex> vertices, const VertexSet& w,
                                 std::size_t d_max) {
  ResidueCoverage out;
  out.d_max = d_max;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::size_t deg = g.degree_into(Side::V1, vertices[i], w);
    for (std::size_t m = 2; m <= d_max; ++m) out.table.emplace(std::make_pair(deg % m, m), i);
  }
  return out;
}

bool verify_residue_coverage(const BipartiteGraph& g, std::span<const Vertex> vertices, const VertexSet& w,
                             const ResidueCoverage& coverage) {
  for (const auto& [key, index] : coverage.table) {
    const auto [k, m] = key;
    if (m < 2 || m > coverage.d_max || k >= m || index >= vertices.size()) return false;
    if (g.degree_into(Side::V1, vertices[index], w) % m != k) return false;
  }
  return true;
}

SearchFailure::SearchFailure(std::size_t attempts, std::size_t e1, std::size_t e2, std::size_t e3)
    : Error("no good W in " + std::to_string(attempts) + " attempts (failures: shift sets " + std::to_string(e1) +
            ", residues " + std::to_string(e2) + ", size " + std::to_string(e3) + ")"),
      attempts_(attempts),
      e1_(e1),
      e2_(e2),
      e3_(e3) {}

GoodW good_W_search(const BipartiteGraph& g, const std::vector<PairStructure>& structures,
                    const PrivateNeighborhoodSeq& s2, const GoodWOptions& options) {
  if (structures.empty()) throw ConfigError("good_W_search needs at least one structure");
  if (options.max_attempts == 0) throw ConfigError("max_attempts must be at least 1");
  const std::size_t n2 = g.n2();
  const VertexSet pool = options.pool ? *options.pool : VertexSet::full(n2);
  const VertexSet anchor = options.anchor ? *options.anchor : VertexSet(n2);
  if (pool.universe() != n2 || anchor.universe() != n2) throw MalformedInput("W masks must live in V2");
  for (const auto& s : structures) {
    if (s.side() != Side::V1) throw MalformedInput("structures must live in V1");
  }
  const double big = options.delta * static_cast<double>(ceil_sqrt(n2));
  const std::size_t need_good = (structures.size() + 1) / 2;
  const double need_size = static_cast<double>(pool.count()) / 4.0;

  std::size_t e1 = 0, e2 = 0, e3 = 0;
  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
    Rng rng(derive_seed(options.seed, attempt));
    VertexSet sampled = sample_W(n2, rng) & pool;
    GoodW out;
    out.attempts = attempt + 1;
    out.w = sampled | anchor;
    for (std::size_t i = 0; i < structures.size(); ++i) {
      out.shifts.push_back(degree_shift_set(g, structures[i], out.w, i));
      if (static_cast<double>(out.shifts.back().size()) >= big) out.good.push_back(i);
    }
    out.coverage = residue_coverage(g, s2.vertices, out.w, options.d_max);
    const bool ok1 = out.good.size() >= need_good;
    const bool ok2 = out.coverage.complete();
    const bool ok3 = static_cast<double>(sampled.count()) >= need_size;
    e1 += !ok1;
    e2 += !ok2;
    e3 += !ok3;
    if (ok1 && ok2 && ok3) return out;
  }
  throw SearchFailure(options.max_attempts, e1, e2, e3);
}

}  // namespace bipsize
