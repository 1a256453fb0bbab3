#include "bipsize/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "bipsize/anticoncentration.hpp"
#include "bipsize/kernels.hpp"
#include "bipsize/ramsey_metrics.hpp"
#include "bipsize/rng.hpp"
#include "bipsize/structures.hpp"
#include "bipsize/sumset.hpp"

namespace bipsize {

bool verify_witness(const BipartiteGraph& g, const SizeWitness& w) {
  if (w.u1.universe() != g.n1() || w.u2.universe() != g.n2()) return false;
  return induced_edge_count(g, w.u1, w.u2) == w.edge_count;
}

nlohmann::json to_json(const SizeWitness& w, std::size_t target) {
  return {{"target", target},
          {"u1", w.u1.indices()},
          {"u2", w.u2.indices()},
          {"edge_count", w.edge_count},
          {"provenance", w.provenance}};
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& why) { throw ConfigError("solver config: " + why); };
  if (!(C > 0)) fail("C must be positive");
  if (!(c > 0 && c < 1)) fail("c must lie in (0, 1)");
  if (!(eps > 0 && eps < 1)) fail("eps must lie in (0, 1)");
  if (!(delta >= 0)) fail("delta must be non-negative");
  if (d0 < 1) fail("d0 must be at least 1");
  if (L < 1) fail("L must be at least 1");
  if (!(C0 > 0)) fail("C0 must be positive");
  if (!(frac_u1 > 0 && frac_u2 > 0 && frac_u3 > 0)) fail("partition fractions must be positive");
  if (std::abs(frac_u1 + frac_u2 + frac_u3 - 1.0) > 1e-9) fail("partition fractions must sum to 1");
  if (w_attempts < 1 || cell_attempts < 1) fail("attempt budgets must be at least 1");
  if (!(ladder_ratio > 0 && ladder_ratio < 1)) fail("ladder_ratio must lie in (0, 1)");
}

SolverStageError::SolverStageError(std::string stage, const std::string& detail)
    : Error(stage + " stage failed: " + detail), stage_(std::move(stage)) {}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

}  // namespace

Unsolved::Unsolved(std::size_t target, std::vector<std::string> paths)
    : Error("no witness for size " + std::to_string(target) + " (tried: " + join(paths) + ")"),
      paths_(std::move(paths)) {}

// ---------------------------------------------------------------------------
// Interval construction

struct IntervalResult::State {
  BipartiteGraph graph;
  std::vector<Vertex> y;  // local V2 index -> graph V2 index
  VertexSet w_global;
  std::vector<PairStructure> structures;
  std::vector<DegreeShiftSet> shifts;
  std::vector<std::size_t> good;
  std::vector<Vertex> heads;
  std::optional<ProgressionWitness> progression;
  std::vector<Vertex> s_list;
  std::vector<std::size_t> s_deg;
  std::vector<Vertex> pool;
  std::vector<std::size_t> pool_deg;
  // base value -> (progression term or -1, residue vertex index or -1)
  std::map<std::size_t, std::pair<std::int64_t, std::int64_t>> base;
  std::size_t bits = 0;
  std::vector<std::vector<std::uint64_t>> layers;
  std::size_t lo = 0;
  std::size_t hi = 0;
  IntervalStats stats;
  std::map<std::size_t, SizeWitness> eager;

  explicit State(BipartiteGraph g) : graph(std::move(g)), w_global(0) {}

  bool test(const std::vector<std::uint64_t>& layer, std::size_t m) const {
    return m < bits && ((layer[m / 64] >> (m % 64)) & 1U);
  }
  std::optional<SizeWitness> build(std::size_t m) const;
};

std::optional<SizeWitness> IntervalResult::State::build(std::size_t m) const {
  if (!test(layers.back(), m)) return std::nullopt;
  std::size_t rest = m;
  std::vector<Vertex> bridge;
  for (std::size_t j = pool.size(); j > 0; --j) {
    if (test(layers[j - 1], rest)) continue;
    bridge.push_back(pool[j - 1]);
    rest -= pool_deg[j - 1];
  }
  auto it = base.find(rest);
  if (it == base.end()) throw Error("interval witness reconstruction lost its base value");
  const auto [term, s_index] = it->second;

  VertexSet u1(graph.n1());
  for (Vertex h : heads) u1.set(h);
  nlohmann::json edits = nlohmann::json::array();
  if (term >= 0) {
    const auto& row = progression->decompositions[static_cast<std::size_t>(term)];
    for (std::size_t k = 0; k < good.size(); ++k) {
      const std::int64_t delta = row[k];
      if (delta == 0) continue;
      const auto& shift = shifts[good[k]];
      const std::size_t realizer = shift.realizers.at(shift.edit_sign * delta);
      apply_swap(structures[good[k]], realizer, u1);
      edits.push_back({{"structure", good[k]}, {"realizer", realizer}, {"delta", delta}});
    }
  }
  nlohmann::json residue = nullptr;
  if (s_index >= 0) {
    u1.set(s_list[static_cast<std::size_t>(s_index)]);
    residue = s_list[static_cast<std::size_t>(s_index)];
  }
  for (Vertex b : bridge) u1.set(b);
  std::sort(bridge.begin(), bridge.end());

  SizeWitness w{u1, w_global, m, nlohmann::json::object()};
  w.provenance["path"] = "interval";
  w.provenance["e0"] = stats.e0;
  w.provenance["edits"] = edits;
  w.provenance["residue_vertex"] = residue;
  w.provenance["bridge"] = bridge;
  if (!verify_witness(graph, w)) throw Error("interval witness for " + std::to_string(m) + " failed recount");
  return w;
}

IntervalResult::IntervalResult(std::shared_ptr<const State> state) : state_(std::move(state)) {}
std::size_t IntervalResult::lo() const { return state_->lo; }
std::size_t IntervalResult::hi() const { return state_->hi; }
bool IntervalResult::covers(std::size_t m) const { return state_->test(state_->layers.back(), m); }
std::vector<std::size_t> IntervalResult::covered() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < state_->bits; ++m) {
    if (covers(m)) out.push_back(m);
  }
  return out;
}
std::optional<SizeWitness> IntervalResult::witness(std::size_t m) const {
  auto it = state_->eager.find(m);
  if (it != state_->eager.end()) return it->second;
  return state_->build(m);
}
const std::map<std::size_t, SizeWitness>& IntervalResult::witnesses() const { return state_->eager; }
const IntervalStats& IntervalResult::stats() const { return state_->stats; }

namespace {

std::size_t round_count(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

bool typical(std::size_t deg, std::size_t w_size, double C) {
  const double eps = 1.0 / (64.0 * C);
  const double w = static_cast<double>(w_size);
  const double d = static_cast<double>(deg);
  return d >= eps * w && d <= (1.0 - eps) * w;
}

}  // namespace

IntervalResult construct_interval(const BipartiteGraph& g, const SolverConfig& config) {
  config.validate();
  if (g.n1() == 0 || g.n2() == 0) throw SolverStageError("density", "empty class");
  if (!density_in_bounds(g, RamseyParams{config.C})) {
    throw SolverStageError("density", "edge density " + std::to_string(g.density()) + " outside the Ramsey bounds");
  }
  const std::size_t n1 = g.n1();
  const std::size_t n2 = g.n2();
  Rng rng(derive_seed(config.seed, 0));

  // Partition V1 into U1, U2, U3 and pick V2'.
  std::vector<Vertex> perm1(n1);
  std::iota(perm1.begin(), perm1.end(), Vertex{0});
  rng.shuffle(std::span<Vertex>(perm1));
  const std::size_t size_u1 = std::min(n1, round_count(config.frac_u1 * static_cast<double>(n1)));
  const std::size_t size_u2 = std::min(n1 - size_u1, round_count(config.frac_u2 * static_cast<double>(n1)));
  VertexSet u1_mask(n1), u2_mask(n1), u3_mask(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    if (i < size_u1) {
      u1_mask.set(perm1[i]);
    } else if (i < size_u1 + size_u2) {
      u2_mask.set(perm1[i]);
    } else {
      u3_mask.set(perm1[i]);
    }
  }
  std::vector<Vertex> perm2(n2);
  std::iota(perm2.begin(), perm2.end(), Vertex{0});
  rng.shuffle(std::span<Vertex>(perm2));
  const std::size_t n_prime =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(config.c * static_cast<double>(n2) - 1e-9)), 1, n2);
  std::vector<Vertex> v2_prime(perm2.begin(), perm2.begin() + static_cast<std::ptrdiff_t>(n_prime));
  std::sort(v2_prime.begin(), v2_prime.end());

  auto state = std::make_shared<IntervalResult::State>(g);
  std::vector<Vertex> all1(n1);
  std::iota(all1.begin(), all1.end(), Vertex{0});
  if (config.anchor_rest) {
    state->y.resize(n2);
    std::iota(state->y.begin(), state->y.end(), Vertex{0});
  } else {
    state->y = v2_prime;
  }
  const BipartiteGraph h = g.induced(all1, state->y);
  VertexSet pool_mask(h.n2()), anchor_mask(h.n2());
  for (std::size_t j = 0; j < state->y.size(); ++j) {
    if (std::binary_search(v2_prime.begin(), v2_prime.end(), state->y[j])) {
      pool_mask.set(j);
    } else {
      anchor_mask.set(j);
    }
  }

  // Vertex-disjoint pair structures inside U1.
  const std::size_t per_size = config.structure_size ? config.structure_size : std::max<std::size_t>(1, ceil_sqrt(n_prime));
  const std::size_t family_size =
      config.family_size ? config.family_size
                         : static_cast<std::size_t>(std::ceil(config.C0 * std::sqrt(static_cast<double>(n2))));
  try {
    state->structures =
        extract_disjoint_family(h, Side::V1, config.eps, per_size, family_size, u1_mask.complement(),
                                derive_seed(config.seed, 1));
  } catch (const FamilyExtractionFailure& e) {
    state->structures = e.partial();
  }
  if (state->structures.empty()) throw SolverStageError("extraction", "no pair structure in U1");
  state->stats.structures = state->structures.size();

  // Private-neighbourhood sequence inside U2, against V2' only.
  PrivateNeighborhoodSeq s2;
  {
    const BipartiteGraph h2 = config.anchor_rest ? g.induced(all1, v2_prime) : h;
    const std::size_t min_private =
        config.min_private ? config.min_private : std::max<std::size_t>(1, ceil_sqrt(n_prime) / 2);
    PrivateSeqOptions opts;
    opts.candidates = u2_mask;
    try {
      s2 = find_private_neighborhood_seq(h2, config.L, min_private, opts);
    } catch (const PrivateSeqFailure& e) {
      s2 = e.partial();
    }
  }
  state->stats.s2_size = s2.size();

  // Good W, then the progression; retry W when the step leaves residue holes.
  GoodWOptions wopts;
  wopts.d_max = static_cast<std::size_t>(config.d0);
  wopts.delta = config.delta;
  wopts.max_attempts = config.w_attempts;
  wopts.pool = pool_mask;
  wopts.anchor = anchor_mask;
  std::optional<GoodW> good_w;
  std::optional<ProgressionWitness> progression;
  std::vector<IntSet> delta_sets;
  for (std::size_t round = 0; round <= config.residue_retries; ++round) {
    wopts.seed = derive_seed(config.seed, 100 + round);
    wopts.d_max = static_cast<std::size_t>(config.d0);
    std::optional<GoodW> found;
    bool relaxed = false;
    try {
      found = good_W_search(h, state->structures, s2, wopts);
    } catch (const SearchFailure&) {
      wopts.d_max = 1;
      relaxed = true;
      try {
        found = good_W_search(h, state->structures, s2, wopts);
      } catch (const SearchFailure& e) {
        if (!good_w) throw SolverStageError("good-W", e.what());
        break;
      }
    }
    std::vector<IntSet> sets;
    for (std::size_t i : found->good) {
      IntSet s = found->shifts[i].edit_deltas();
      s.push_back(0);
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      sets.push_back(std::move(s));
    }
    std::optional<ProgressionWitness> prog;
    if (!sets.empty()) {
      try {
        prog = find_progression(sets, 1, ProgressionOptions{config.d0});
      } catch (const InsufficientSets& e) {
        prog = e.best();
      } catch (const Error& e) {
        throw SolverStageError("progression", e.what());
      }
    }
    good_w = std::move(found);
    progression = std::move(prog);
    delta_sets = std::move(sets);
    state->stats.residues_relaxed = relaxed;
    state->stats.w_attempts += good_w->attempts;
    const std::int64_t step = progression ? progression->d : 1;
    bool holes = false;
    if (step >= 2) {
      ResidueCoverage cov = residue_coverage(h, s2.vertices, good_w->w, static_cast<std::size_t>(step));
      for (std::size_t k = 0; k < static_cast<std::size_t>(step); ++k) holes = holes || !cov.find(k, step);
    }
    if (!holes) break;
  }

  const VertexSet& w = good_w->w;
  state->shifts = good_w->shifts;
  state->good = good_w->good;
  state->progression = progression;
  state->w_global = VertexSet(n2);
  w.for_each([&](Vertex j) { state->w_global.set(state->y[j]); });
  state->stats.w_size = w.count();
  state->stats.good_structures = state->good.size();

  std::size_t e0 = 0;
  for (const auto& s : state->structures) {
    for (Vertex x : s.head()) {
      state->heads.push_back(x);
      e0 += h.degree_into(Side::V1, x, w);
    }
  }
  state->stats.e0 = e0;
  if (progression) {
    state->stats.progression_a = progression->a;
    state->stats.progression_d = progression->d;
    state->stats.progression_length = progression->length;
  }

  // Residue vertices and the bridging pool.
  state->s_list = s2.vertices;
  for (Vertex s : state->s_list) state->s_deg.push_back(h.degree_into(Side::V1, s, w));
  VertexSet used(n1);
  for (const auto& s : state->structures) {
    for (Vertex v : s.vertices()) used.set(v);
  }
  for (Vertex s : state->s_list) used.set(s);
  const VertexSet pool_source = config.bridge_unused ? used.complement() : (u3_mask - used);
  pool_source.for_each([&](Vertex v) {
    const std::size_t deg = h.degree_into(Side::V1, v, w);
    if (config.bridge_typical_only && !typical(deg, w.count(), config.C)) return;
    state->pool.push_back(v);
    state->pool_deg.push_back(deg);
  });
  state->stats.bridge_size = state->pool.size();

  // Base values e0 + progression term + optional residue vertex.
  const std::int64_t terms = progression ? static_cast<std::int64_t>(progression->length) : 0;
  auto add_base = [&](std::int64_t value, std::int64_t term, std::int64_t s_index) {
    if (value < 0) throw Error("negative base value in interval construction");
    state->base.emplace(static_cast<std::size_t>(value), std::make_pair(term, s_index));
  };
  for (std::int64_t s_index = -1; s_index < static_cast<std::int64_t>(state->s_list.size()); ++s_index) {
    const std::int64_t r = s_index < 0 ? 0 : static_cast<std::int64_t>(state->s_deg[static_cast<std::size_t>(s_index)]);
    if (terms == 0) {
      add_base(static_cast<std::int64_t>(e0) + r, -1, s_index);
    } else {
      for (std::int64_t t = 0; t < terms; ++t) {
        add_base(static_cast<std::int64_t>(e0) + progression->term(static_cast<std::size_t>(t)) + r, t, s_index);
      }
    }
  }

  // Subset sums of the pool on top of every base value.
  state->bits = n1 * w.count() + 1;
  const std::size_t words = words_for(state->bits);
  state->layers.assign(1, std::vector<std::uint64_t>(words, 0));
  for (const auto& [value, choice] : state->base) {
    if (value < state->bits) state->layers[0][value / 64] |= std::uint64_t{1} << (value % 64);
  }
  const auto& k = kernels::active();
  for (std::size_t j = 0; j < state->pool.size(); ++j) {
    std::vector<std::uint64_t> next = state->layers.back();
    k.or_shifted(next.data(), state->layers.back().data(), words, state->pool_deg[j]);
    state->layers.push_back(std::move(next));
  }
  const auto& last = state->layers.back();
  std::size_t run = 0;
  std::size_t best = 0;
  for (std::size_t m = 0; m < state->bits; ++m) {
    if (state->test(last, m)) {
      ++run;
      if (run > best) {
        best = run;
        state->hi = m;
        state->lo = m + 1 - run;
      }
    } else {
      run = 0;
    }
  }
  if (best == 0) throw SolverStageError("bridging", "no realizable size");

  if (config.eager_witnesses) {
    for (std::size_t m = state->lo; m <= state->hi; ++m) state->eager.emplace(m, *state->build(m));
  }
  return IntervalResult(std::move(state));
}

// ---------------------------------------------------------------------------
// Exact fallback and oracle

namespace {

// Enumerates subsets S of the smaller class; for each, subset sums over the
// other class of d^S(v). Records the first S reaching each size.
class ExactTable {
 public:
  ExactTable(const BipartiteGraph& g, std::size_t budget) : g_(g) {
    flip_ = g.n2() < g.n1();
    a_ = flip_ ? g.n2() : g.n1();
    b_ = flip_ ? g.n1() : g.n2();
    if (a_ > budget || a_ >= 63) {
      throw BudgetExceeded("exact enumeration needs a class of at most " + std::to_string(budget) + " vertices");
    }
    bits_ = a_ * b_ + 1;
    first_.assign(bits_, kUnset);
    const std::size_t words = words_for(bits_);
    std::vector<std::uint64_t> reach(words), next(words);
    const auto& k = kernels::active();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a_); ++mask) {
      std::fill(reach.begin(), reach.end(), 0);
      reach[0] = 1;
      for (std::size_t v = 0; v < b_; ++v) {
        const std::size_t deg = degree(mask, v);
        if (deg == 0) continue;
        next = reach;
        k.or_shifted(next.data(), reach.data(), words, deg);
        std::swap(reach, next);
      }
      for (std::size_t m = 0; m < bits_; ++m) {
        if (first_[m] == kUnset && ((reach[m / 64] >> (m % 64)) & 1U)) first_[m] = mask;
      }
    }
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < bits_; ++m) {
      if (first_[m] != kUnset) out.push_back(m);
    }
    return out;
  }

  std::optional<SizeWitness> witness(std::size_t m) const {
    if (m >= bits_ || first_[m] == kUnset) return std::nullopt;
    const std::uint64_t mask = first_[m];
    const std::size_t words = words_for(bits_);
    std::vector<std::vector<std::uint64_t>> layers(1, std::vector<std::uint64_t>(words, 0));
    layers[0][0] = 1;
    const auto& k = kernels::active();
    std::vector<std::size_t> degs(b_);
    for (std::size_t v = 0; v < b_; ++v) {
      degs[v] = degree(mask, v);
      std::vector<std::uint64_t> next = layers.back();
      if (degs[v] > 0) k.or_shifted(next.data(), layers.back().data(), words, degs[v]);
      layers.push_back(std::move(next));
    }
    VertexSet side_a(a_), side_b(b_);
    for (std::size_t i = 0; i < a_; ++i) {
      if ((mask >> i) & 1U) side_a.set(i);
    }
    std::size_t rest = m;
    for (std::size_t v = b_; v > 0; --v) {
      if ((layers[v - 1][rest / 64] >> (rest % 64)) & 1U) continue;
      side_b.set(v - 1);
      rest -= degs[v - 1];
    }
    SizeWitness w{flip_ ? side_b : side_a, flip_ ? side_a : side_b, m, {{"path", "fallback"}}};
    if (!verify_witness(g_, w)) throw Error("fallback witness failed recount");
    return w;
  }

 private:
  static constexpr std::uint64_t kUnset = ~std::uint64_t{0};

  std::size_t degree(std::uint64_t mask, std::size_t v) const {
    auto row = g_.row(flip_ ? Side::V1 : Side::V2, v);
    std::size_t deg = 0;
    for (std::size_t w = 0; w < row.size(); ++w) {
      const std::uint64_t m = w == 0 ? mask : 0;  // a_ < 64
      deg += static_cast<std::size_t>(std::popcount(row[w] & m));
    }
    return deg;
  }

  const BipartiteGraph& g_;
  bool flip_ = false;
  std::size_t a_ = 0;
  std::size_t b_ = 0;
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> first_;
};

}  // namespace

std::vector<std::size_t> achievable_sizes_oracle(const BipartiteGraph& g, std::size_t budget) {
  return ExactTable(g, budget).sizes();
}

// ---------------------------------------------------------------------------
// Per-target solver

struct SizeSolver::Impl {
  struct Cell {
    std::vector<Vertex> keep1;
    std::vector<Vertex> keep2;
    bool transposed = false;
    SolverConfig config;
    std::string label;
    bool built = false;
    std::optional<IntervalResult> result;
  };

  const BipartiteGraph& g;
  SolverConfig config;
  std::vector<Cell> cells;
  std::size_t built = 0;
  std::size_t failed = 0;
  std::optional<std::unique_ptr<ExactTable>> exact;  // engaged once tried; null when over budget

  Impl(const BipartiteGraph& graph, SolverConfig cfg) : g(graph), config(std::move(cfg)) {
    config.validate();
    plan_cells();
  }

  std::vector<SolverConfig> variants() const {
    SolverConfig anchored = config;
    anchored.anchor_rest = true;
    anchored.bridge_unused = true;
    SolverConfig heavy = anchored;
    heavy.frac_u1 = 0.25;
    heavy.frac_u2 = 0.125;
    heavy.frac_u3 = 0.625;
    return {config, anchored, heavy};
  }

  static std::vector<std::size_t> ladder(std::size_t n, double ratio) {
    const auto floor_size = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-9));
    std::vector<std::size_t> out;
    for (double s = static_cast<double>(n); s >= static_cast<double>(floor_size); s *= ratio) {
      const auto v = static_cast<std::size_t>(std::floor(s));
      if (v < std::max<std::size_t>(floor_size, 2)) break;
      if (out.empty() || out.back() != v) out.push_back(v);
    }
    return out;
  }

  void plan_cells() {
    const auto sizes1 = ladder(g.n1(), config.ladder_ratio);
    const auto sizes2 = ladder(g.n2(), config.ladder_ratio);
    const auto vars = variants();
    std::uint64_t index = 0;
    for (std::size_t a = 0; a < sizes1.size(); ++a) {
      for (std::size_t b = 0; b < sizes2.size(); ++b) {
        const std::size_t m1 = sizes1[a];
        const std::size_t m2 = sizes2[b];
        for (std::size_t attempt = 0; attempt < config.cell_attempts; ++attempt) {
          Rng rng(derive_seed(config.seed, 0x5000 + index));
          std::vector<Vertex> p1(g.n1()), p2(g.n2());
          std::iota(p1.begin(), p1.end(), Vertex{0});
          std::iota(p2.begin(), p2.end(), Vertex{0});
          rng.shuffle(std::span<Vertex>(p1));
          rng.shuffle(std::span<Vertex>(p2));
          p1.resize(m1);
          p2.resize(m2);
          std::sort(p1.begin(), p1.end());
          std::sort(p2.begin(), p2.end());
          for (std::size_t v = 0; v < vars.size(); ++v) {
            for (bool transposed : {false, true}) {
              Cell cell;
              cell.keep1 = p1;
              cell.keep2 = p2;
              cell.transposed = transposed;
              cell.config = vars[v];
              cell.config.seed = derive_seed(config.seed, index);
              cell.label = std::to_string(m1) + "x" + std::to_string(m2) + "/v" + std::to_string(v) +
                           (transposed ? "/t" : "/n") + "/a" + std::to_string(attempt);
              cells.push_back(std::move(cell));
              ++index;
            }
          }
        }
      }
    }
  }

  void build(Cell& cell) {
    cell.built = true;
    ++built;
    try {
      BipartiteGraph sub = g.induced(cell.keep1, cell.keep2);
      if (cell.transposed) sub = sub.transposed();
      cell.result = construct_interval(sub, cell.config);
    } catch (const Error&) {
      ++failed;
    }
  }

  SizeWitness lift(const Cell& cell, SizeWitness local) const {
    VertexSet u1(g.n1()), u2(g.n2());
    const VertexSet& a = cell.transposed ? local.u2 : local.u1;
    const VertexSet& b = cell.transposed ? local.u1 : local.u2;
    a.for_each([&](Vertex i) { u1.set(cell.keep1[i]); });
    b.for_each([&](Vertex j) { u2.set(cell.keep2[j]); });
    SizeWitness w{u1, u2, local.edge_count, local.provenance};
    w.provenance["cell"] = cell.label;
    if (!verify_witness(g, w)) throw Error("lifted witness failed recount");
    return w;
  }

  std::optional<SizeWitness> star_slice(std::size_t m) const {
    for (Side side : {Side::V2, Side::V1}) {
      std::optional<Vertex> best;
      for (Vertex v = 0; v < g.size(side); ++v) {
        if (!best || g.degree(side, v) > g.degree(side, *best)) best = v;
      }
      if (!best || g.degree(side, *best) < m) continue;
      VertexSet slice(g.size(opposite(side)));
      std::size_t taken = 0;
      g.neighbors(side, *best).for_each([&](Vertex u) {
        if (taken < m) {
          slice.set(u);
          ++taken;
        }
      });
      VertexSet centre(g.size(side));
      centre.set(*best);
      SizeWitness w{side == Side::V2 ? slice : centre, side == Side::V2 ? centre : slice, m,
                    {{"path", "star-slice"}, {"centre", *best}, {"centre_side", side_name(side)}}};
      if (!verify_witness(g, w)) throw Error("star slice failed recount");
      return w;
    }
    return std::nullopt;
  }

  std::optional<SizeWitness> solve(std::size_t m, std::vector<std::string>& tried) {
    if (m > g.n1() * g.n2()) {
      tried.push_back("size exceeds n1*n2");
      return std::nullopt;
    }
    if (m == 0) {
      return SizeWitness{VertexSet(g.n1()), VertexSet(g.n2()), 0, {{"path", "empty"}}};
    }
    if (m == g.edge_count()) {
      return SizeWitness{VertexSet::full(g.n1()), VertexSet::full(g.n2()), m, {{"path", "whole"}}};
    }
    if (auto w = star_slice(m)) return w;
    tried.push_back("star-slice");

    for (auto& cell : cells) {
      if (!cell.built) build(cell);
      if (cell.result && cell.result->covers(m)) {
        if (auto w = cell.result->witness(m)) return lift(cell, std::move(*w));
      }
    }
    tried.push_back("interval cells (" + std::to_string(built) + " built, " + std::to_string(failed) + " refused)");

    if (!exact) {
      try {
        exact = std::make_unique<ExactTable>(g, config.fallback_budget);
      } catch (const BudgetExceeded&) {
        exact = std::unique_ptr<ExactTable>();
      }
    }
    if (*exact) {
      if (auto w = (*exact)->witness(m)) return w;
      tried.push_back("exact fallback (size not achievable)");
    } else {
      tried.push_back("exact fallback (over budget)");
    }
    return std::nullopt;
  }
};

SizeSolver::SizeSolver(const BipartiteGraph& g, SolverConfig config)
    : impl_(std::make_unique<Impl>(g, std::move(config))) {}
SizeSolver::~SizeSolver() = default;

SizeWitness SizeSolver::solve(std::size_t m) {
  std::vector<std::string> tried;
  auto w = impl_->solve(m, tried);
  if (!w) throw Unsolved(m, std::move(tried));
  return std::move(*w);
}

std::optional<SizeWitness> SizeSolver::try_solve(std::size_t m) {
  std::vector<std::string> tried;
  return impl_->solve(m, tried);
}

std::size_t SizeSolver::cells_built() const { return impl_->built; }
std::size_t SizeSolver::cells_failed() const { return impl_->failed; }

SizeWitness solve_target(const BipartiteGraph& g, std::size_t m, const SolverConfig& config) {
  SizeSolver solver(g, config);
  return solver.solve(m);
}

}  // namespace bipsize
