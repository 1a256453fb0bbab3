#include "bipsize/ramsey_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bipsize/kernels.hpp"
#include "bipsize/rng.hpp"

namespace bipsize {

double RamseyParams::threshold(std::size_t n) const {
  return C * std::log2(static_cast<double>(n));
}

std::size_t fifth_root_allowance(std::size_t n) {
  if (n == 0) return 0;
  // Guard against pow() landing a hair above an exact integer root.
  const double root = std::pow(static_cast<double>(n), 0.2);
  const double rounded = std::round(root);
  if (std::abs(root - rounded) < 1e-9) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(root));
}

const char* verdict_name(RamseyVerdict v) {
  switch (v) {
    case RamseyVerdict::Ramsey:
      return "ramsey";
    case RamseyVerdict::NotRamsey:
      return "not-ramsey";
    case RamseyVerdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

std::size_t ceil_threshold(double t) {
  const double r = std::round(t);
  if (std::abs(t - r) < 1e-9) return static_cast<std::size_t>(std::max(1.0, r));
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t)));
}

// Depth-first search for `need_branch` vertices of the branching class whose
// (possibly complemented) rows share at least `need_other` common members.
class BicliqueSearch {
 public:
  BicliqueSearch(std::vector<std::vector<std::uint64_t>> rows, std::size_t other_size,
                 std::size_t need_branch, std::size_t need_other, std::uint64_t budget)
      : rows_(std::move(rows)),
        other_size_(other_size),
        words_(words_for(other_size)),
        need_branch_(need_branch),
        need_other_(need_other),
        budget_(budget) {
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (k.popcount(rows_[i].data(), words_) >= need_other_) order_.push_back(i);
    }
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return k.popcount(rows_[a].data(), words_) > k.popcount(rows_[b].data(), words_);
    });
  }

  // true: found; false: exhausted; nullopt: budget hit.
  std::optional<bool> run() {
    std::vector<std::uint64_t> all(words_, ~std::uint64_t{0});
    if (other_size_ % 64 != 0 && words_ > 0) all.back() = (std::uint64_t{1} << (other_size_ % 64)) - 1;
    chosen_.clear();
    return dfs(0, all);
  }

  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::size_t>& chosen() const { return chosen_; }
  const std::vector<std::uint64_t>& common() const { return common_; }

 private:
  std::optional<bool> dfs(std::size_t start, const std::vector<std::uint64_t>& common) {
    if (chosen_.size() == need_branch_) {
      common_ = common;
      return true;
    }
    const auto& k = kernels::active();
    std::vector<std::uint64_t> next(words_);
    for (std::size_t idx = start; idx < order_.size(); ++idx) {
      if (order_.size() - idx < need_branch_ - chosen_.size()) break;
      if (++nodes_ > budget_) return std::nullopt;
      const auto& r = rows_[order_[idx]];
      for (std::size_t w = 0; w < words_; ++w) next[w] = common[w] & r[w];
      if (k.popcount(next.data(), words_) < need_other_) continue;
      chosen_.push_back(order_[idx]);
      auto found = dfs(idx + 1, next);
      if (!found.has_value() || *found) return found;
      chosen_.pop_back();
    }
    return false;
  }

  std::vector<std::vector<std::uint64_t>> rows_;
  std::size_t other_size_;
  std::size_t words_;
  std::size_t need_branch_;
  std::size_t need_other_;
  std::uint64_t budget_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> chosen_;
  std::vector<std::uint64_t> common_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

RamseyReport is_c_ramsey(const BipartiteGraph& g, const RamseyParams& params,
                         const RamseySearchOptions& options) {
  if (g.n1() < 2 || g.n2() < 2) throw MalformedInput("is_c_ramsey needs both classes of size >= 2");
  if (!(params.C > 0)) throw ConfigError("Ramsey constant must be positive");
  RamseyReport report;
  report.t1 = ceil_threshold(params.threshold(g.n1()));
  report.t2 = ceil_threshold(params.threshold(g.n2()));
  if (report.t1 > g.n1() || report.t2 > g.n2()) {
    report.degenerate_threshold = true;
    report.verdict = RamseyVerdict::Ramsey;
    return report;
  }
  // Branch over the class with the smaller threshold.
  const Side branch = report.t1 <= report.t2 ? Side::V1 : Side::V2;
  const Side other = opposite(branch);
  const std::size_t need_branch = branch == Side::V1 ? report.t1 : report.t2;
  const std::size_t need_other = branch == Side::V1 ? report.t2 : report.t1;
  const std::size_t words = g.row_words(branch);
  const std::size_t other_size = g.size(other);

  bool budget_hit = false;
  for (bool complete : {true, false}) {
    std::vector<std::vector<std::uint64_t>> rows(g.size(branch));
    for (Vertex v = 0; v < g.size(branch); ++v) {
      auto r = g.row(branch, v);
      rows[v].assign(r.begin(), r.end());
      if (!complete) {
        for (auto& w : rows[v]) w = ~w;
        if (other_size % 64 != 0) rows[v].back() &= (std::uint64_t{1} << (other_size % 64)) - 1;
      }
    }
    (void)words;
    BicliqueSearch search(std::move(rows), other_size, need_branch, need_other,
                          options.node_budget - std::min(options.node_budget, report.nodes));
    auto found = search.run();
    report.nodes += search.nodes();
    if (!found.has_value()) {
      budget_hit = true;
      continue;
    }
    if (*found) {
      VertexSet branch_set(g.size(branch));
      for (auto v : search.chosen()) branch_set.set(v);
      VertexSet common = VertexSet::from_words(other_size, search.common());
      VertexSet other_set(other_size);
      std::size_t taken = 0;
      common.for_each([&](Vertex v) {
        if (taken < need_other) {
          other_set.set(v);
          ++taken;
        }
      });
      HomogeneousWitness witness;
      witness.complete = complete;
      witness.a = branch == Side::V1 ? branch_set : other_set;
      witness.b = branch == Side::V1 ? other_set : branch_set;
      report.witness = std::move(witness);
      report.verdict = RamseyVerdict::NotRamsey;
      return report;
    }
  }
  report.verdict = budget_hit ? RamseyVerdict::Unknown : RamseyVerdict::Ramsey;
  return report;
}

bool density_in_bounds(const BipartiteGraph& g, const RamseyParams& params) {
  const double eps = params.epsilon_density();
  const double density = g.density();
  return density >= eps && density <= 1.0 - eps;
}

VertexSet degree_typical_vertices(const BipartiteGraph& g, Side side, const RamseyParams& params) {
  const double n_opp = static_cast<double>(g.size(opposite(side)));
  const double eps = params.epsilon_degree();
  VertexSet out(g.size(side));
  for (Vertex v = 0; v < g.size(side); ++v) {
    const double d = static_cast<double>(g.degree(side, v));
    if (d >= eps * n_opp && d <= (1.0 - eps) * n_opp) out.set(v);
  }
  return out;
}

PrivateSeqFailure::PrivateSeqFailure(std::size_t step, PrivateNeighborhoodSeq partial)
    : Error("private neighbourhood sequence: no admissible vertex at step " + std::to_string(step)),
      step_(step),
      partial_(std::move(partial)) {}

PrivateNeighborhoodSeq find_private_neighborhood_seq(const BipartiteGraph& g, std::size_t L,
                                                     std::size_t min_private,
                                                     const PrivateSeqOptions& options) {
  if (L == 0) throw ConfigError("private neighbourhood sequence needs L >= 1");
  VertexSet pool = options.candidates ? *options.candidates : VertexSet::full(g.n1());
  if (pool.universe() != g.n1()) throw MalformedInput("candidate pool must live in V1");
  VertexSet residual = VertexSet::full(g.n2());
  PrivateNeighborhoodSeq seq;
  for (std::size_t step = 1; step <= L; ++step) {
    const std::size_t t_size = residual.count();
    std::optional<Vertex> best;
    std::size_t best_score = 0;
    pool.for_each([&](Vertex v) {
      const std::size_t priv = g.degree_into(Side::V1, v, residual);
      const std::size_t rest = t_size - priv;
      if (priv < min_private || priv == 0) return;
      if (options.typical_C) {
        const double eps = 1.0 / (32.0 * *options.typical_C);
        const double t = static_cast<double>(t_size);
        if (static_cast<double>(priv) < eps * t || static_cast<double>(priv) > (1.0 - eps) * t) return;
      }
      const std::size_t score = std::min(priv, rest);
      if (!best || score > best_score) {
        best = v;
        best_score = score;
      }
    });
    if (!best) throw PrivateSeqFailure(step, std::move(seq));
    VertexSet priv = g.neighbors(Side::V1, *best) & residual;
    residual -= priv;
    pool.reset(*best);
    seq.vertices.push_back(*best);
    seq.private_sets.push_back(std::move(priv));
    seq.residual_sets.push_back(residual);
  }
  return seq;
}

VertexSet richness_deficient_vertices(const BipartiteGraph& g, Side side_of_w, const VertexSet& w,
                                      double eps) {
  if (w.universe() != g.size(side_of_w)) throw MalformedInput("W does not live in the stated class");
  const Side other = opposite(side_of_w);
  const double limit = eps * static_cast<double>(g.size(other));
  const std::size_t w_size = w.count();
  VertexSet out(g.size(other));
  for (Vertex v = 0; v < g.size(other); ++v) {
    const std::size_t inside = g.degree_into(other, v, w);
    const std::size_t outside = w_size - inside;
    if (static_cast<double>(inside) <= limit || static_cast<double>(outside) < limit) out.set(v);
  }
  return out;
}

namespace {

// Removes vertices one at a time, each time the one whose removal leaves the
// most deficient vertices, until |W| reaches `floor_size`.
VertexSet shrink_adversarially(const BipartiteGraph& g, Side side, VertexSet w, std::size_t floor_size,
                               double eps) {
  while (w.count() > floor_size) {
    std::optional<Vertex> best;
    std::size_t best_count = 0;
    w.for_each([&](Vertex x) {
      VertexSet trial = w;
      trial.reset(x);
      const std::size_t c = richness_deficient_vertices(g, side, trial, eps).count();
      if (!best || c > best_count) {
        best = x;
        best_count = c;
      }
    });
    w.reset(*best);
  }
  return w;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

RichnessReport check_richness(const BipartiteGraph& g, double delta, double eps,
                              const RichnessOptions& options) {
  RichnessReport report;
  report.proven = true;
  auto test = [&](Side side, const VertexSet& w) {
    ++report.sets_tested;
    VertexSet deficient = richness_deficient_vertices(g, side, w, eps);
    if (deficient.count() > fifth_root_allowance(g.size(opposite(side)))) {
      report.violation = RichnessViolation{side, w, std::move(deficient)};
      return true;
    }
    return false;
  };

  for (const auto& [side, w] : options.extra_candidates) {
    if (static_cast<double>(w.count()) < delta * static_cast<double>(g.size(side))) continue;
    if (test(side, w)) {
      report.proven = false;
      return report;
    }
  }

  for (Side side : {Side::V1, Side::V2}) {
    const std::size_t n = g.size(side);
    const auto floor_size = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n) - 1e-12));
    if (floor_size > n) continue;
    if (n <= options.exhaustive_limit) {
      // Deficiency only grows as W shrinks, so the minimum size suffices.
      std::vector<std::size_t> idx(floor_size);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      do {
        VertexSet w(n);
        for (auto i : idx) w.set(i);
        if (test(side, w)) {
          report.proven = false;
          return report;
        }
      } while (next_combination(idx, n));
      continue;
    }
    report.proven = false;
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(side)));
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      VertexSet w(n);
      for (Vertex v = 0; v < n; ++v) {
        if (rng.bernoulli(0.5)) w.set(v);
      }
      while (w.count() < floor_size) w.set(static_cast<Vertex>(rng.below(n)));
      if (test(side, w)) return report;
      if (test(side, shrink_adversarially(g, side, w, floor_size, eps))) return report;
    }
  }
  return report;
}

std::vector<std::size_t> close_vertex_counts(const BipartiteGraph& g, Side side, double c) {
  const std::size_t n = g.size(side);
  const double limit = c * static_cast<double>(g.size(opposite(side)));
  std::vector<std::size_t> counts(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w = v + 1; w < n; ++w) {
      if (static_cast<double>(div_size(g, side, v, w)) <= limit) {
        ++counts[v];
        ++counts[w];
      }
    }
  }
  return counts;
}

std::vector<DiversityViolation> diversity_violations(const BipartiteGraph& g, Side side, double c) {
  const auto counts = close_vertex_counts(g, side, c);
  const std::size_t allowance = fifth_root_allowance(g.size(side));
  std::vector<DiversityViolation> out;
  for (Vertex v = 0; v < counts.size(); ++v) {
    if (counts[v] > allowance) out.push_back({v, counts[v]});
  }
  return out;
}

VertexSet covering_vertices(const BipartiteGraph& g, const OrderedPair& p, double c) {
  const double limit = c * static_cast<double>(g.size(opposite(p.side)));
  const auto& k = kernels::active();
  auto ru = g.row(p.side, p.u);
  auto rv = g.row(p.side, p.v);
  VertexSet out(g.size(p.side));
  for (Vertex z = 0; z < g.size(p.side); ++z) {
    auto rz = g.row(p.side, z);
    if (static_cast<double>(k.popcount_andnot2(ru.data(), rv.data(), rz.data(), ru.size())) <= limit) {
      out.set(z);
    }
  }
  return out;
}

std::vector<std::pair<Vertex, Vertex>> covering_pair_packing(const BipartiteGraph& g,
                                                              const OrderedPair& p, double c) {
  const VertexSet cover = covering_vertices(g, p, c);
  const std::size_t n = g.size(p.side);
  std::vector<bool> used(n, false);
  std::vector<std::pair<Vertex, Vertex>> packing;
  std::size_t next_free = 0;  // scan pointer over non-covering vertices
  for (Vertex z = 0; z < n; ++z) {
    if (!cover.test(z) || used[z]) continue;
    while (next_free < n && (cover.test(next_free) || used[next_free])) ++next_free;
    Vertex partner = n;
    if (next_free < n) {
      partner = next_free;
    } else {
      for (Vertex y = z + 1; y < n; ++y) {
        if (cover.test(y) && !used[y]) {
          partner = y;
          break;
        }
      }
    }
    if (partner == n) break;
    used[z] = used[partner] = true;
    packing.emplace_back(std::min(z, partner), std::max(z, partner));
  }
  return packing;
}

std::vector<PairDiversityViolation> pair_diversity_violations(const BipartiteGraph& g, Side side,
                                                              double c, double alpha,
                                                              const PairDiversityOptions& options) {
  const std::size_t n = g.size(side);
  const double n_opp = static_cast<double>(g.size(opposite(side)));
  const std::size_t allowance = fifth_root_allowance(n);
  std::vector<PairDiversityViolation> out;

  auto examine = [&](Vertex a, Vertex b) {
    if (static_cast<double>(div_size(g, side, a, b)) < alpha * n_opp) return;
    const OrderedPair p = make_ordered_pair(g, side, a, b);
    const std::size_t covering = covering_vertices(g, p, c).count();
    // The greedy packing matches every covering vertex when partners allow.
    const std::size_t others = n - covering;
    const std::size_t packing = std::min(covering, others) + (covering - std::min(covering, others)) / 2;
    if (packing > allowance) out.push_back({p, packing});
  };

  const std::size_t total_pairs = n * (n > 0 ? n - 1 : 0) / 2;
  if (total_pairs <= options.max_pairs) {
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) examine(a, b);
    }
  } else {
    Rng rng(options.seed);
    for (std::size_t s = 0; s < options.sample_pairs; ++s) {
      const auto a = static_cast<Vertex>(rng.below(n));
      auto b = static_cast<Vertex>(rng.below(n - 1));
      if (b >= a) ++b;
      examine(std::min(a, b), std::max(a, b));
    }
  }
  return out;
}

}  // namespace bipsize
