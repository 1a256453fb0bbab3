#include "bipsize/sumset.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "bipsize/kernels.hpp"
#include "bipsize/vertex_set.hpp"

namespace bipsize {

std::vector<std::string> progression_violations(const std::vector<IntSet>& sets, const ProgressionWitness& w,
                                                std::int64_t d0) {
  std::vector<std::string> out;
  if (w.d < 1 || w.d > d0) out.push_back("step " + std::to_string(w.d) + " outside [1, " + std::to_string(d0) + "]");
  if (w.decompositions.size() != w.length) out.push_back("decomposition count differs from length");
  for (std::size_t i = 0; i < w.decompositions.size(); ++i) {
    const auto& row = w.decompositions[i];
    if (row.size() != sets.size()) {
      out.push_back("term " + std::to_string(i) + " does not use every set once");
      continue;
    }
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (std::find(sets[j].begin(), sets[j].end(), row[j]) == sets[j].end()) {
        out.push_back("term " + std::to_string(i) + " uses a non-member of set " + std::to_string(j));
      }
      sum += row[j];
    }
    if (sum != w.term(i)) out.push_back("term " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
  return out;
}

InsufficientSets::InsufficientSets(std::size_t required, std::optional<ProgressionWitness> best)
    : Error("longest progression found has length " + std::to_string(best ? best->length : 0) + ", needed " +
            std::to_string(required)),
      best_(std::move(best)) {}

namespace {

struct Normalized {
  std::vector<IntSet> sets;  // translated to start at 0, sorted, unique
  std::vector<std::int64_t> mins;
  std::int64_t offset = 0;  // Σ mins
};

Normalized normalize(const std::vector<IntSet>& sets) {
  Normalized n;
  for (const auto& s : sets) {
    if (s.empty()) throw MalformedInput("find_progression: every set must be nonempty");
    IntSet t = s;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const std::int64_t lo = t.front();
    for (auto& x : t) x -= lo;
    n.sets.push_back(std::move(t));
    n.mins.push_back(lo);
    n.offset += lo;
  }
  return n;
}

// Progression recipe for one endpoint M'.
struct Plan {
  std::int64_t mod = 1;
  std::int64_t d = 1;
  std::int64_t start = 0;  // in translated coordinates
  std::size_t length = 0;
  // Residue r -> (set used to create it, element, previous residue).
  std::vector<std::int64_t> value;
  std::vector<std::size_t> via_set;
  std::vector<std::int64_t> via_elem;
  std::vector<std::int64_t> via_prev;
  std::vector<std::size_t> ladder;  // unconsumed sets holding both 0 and M'
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::optional<Plan> plan_for(const Normalized& n, std::int64_t mod, std::int64_t d0) {
  const std::size_t k = n.sets.size();
  Plan p;
  p.mod = mod;
  p.value.assign(static_cast<std::size_t>(mod), -1);
  p.via_set.assign(static_cast<std::size_t>(mod), kNone);
  p.via_elem.assign(static_cast<std::size_t>(mod), 0);
  p.via_prev.assign(static_cast<std::size_t>(mod), -1);
  p.value[0] = 0;
  std::size_t reached = 1;

  std::vector<bool> anchored(k), consumed(k, false);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < k; ++i) {
    anchored[i] = std::binary_search(n.sets[i].begin(), n.sets[i].end(), mod);
    if (!anchored[i]) order.push_back(i);
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (anchored[i]) order.push_back(i);
  }

  // Saturate residues; a set is consumed only when it adds a residue.
  bool grew = true;
  while (grew && reached < static_cast<std::size_t>(mod)) {
    grew = false;
    for (std::size_t i : order) {
      if (consumed[i] || reached == static_cast<std::size_t>(mod)) continue;
      // r' -> (value, (element, r))
      std::map<std::int64_t, std::pair<std::int64_t, std::pair<std::int64_t, std::int64_t>>> best;
      for (std::int64_t r = 0; r < mod; ++r) {
        if (p.value[static_cast<std::size_t>(r)] < 0) continue;
        for (std::int64_t e : n.sets[i]) {
          const std::int64_t r2 = (r + e) % mod;
          if (p.value[static_cast<std::size_t>(r2)] >= 0) continue;
          const std::int64_t v = p.value[static_cast<std::size_t>(r)] + e;
          auto it = best.find(r2);
          if (it == best.end() || v < it->second.first) best[r2] = {v, {e, r}};
        }
      }
      if (best.empty()) continue;
      consumed[i] = true;
      grew = true;
      for (const auto& [r2, info] : best) {
        const auto idx = static_cast<std::size_t>(r2);
        p.value[idx] = info.first;
        p.via_set[idx] = i;
        p.via_elem[idx] = info.second.first;
        p.via_prev[idx] = info.second.second;
        ++reached;
      }
    }
  }

  // Smallest divisor d of M' whose multiples all lie in the saturated set.
  std::optional<std::int64_t> step;
  for (std::int64_t d = 1; d <= mod && d <= d0; ++d) {
    if (mod % d != 0) continue;
    bool all = true;
    for (std::int64_t r = 0; r < mod && all; r += d) all = p.value[static_cast<std::size_t>(r)] >= 0;
    if (all) {
      step = d;
      break;
    }
  }
  if (!step) return std::nullopt;
  p.d = *step;

  for (std::size_t i = 0; i < k; ++i) {
    if (anchored[i] && !consumed[i]) p.ladder.push_back(i);
  }
  const auto rungs = static_cast<std::int64_t>(p.ladder.size());

  // Multiples of d reachable as value[r] + j M', 0 <= j <= rungs.
  std::int64_t top = 0;
  for (std::int64_t r = 0; r < mod; r += p.d) top = std::max(top, p.value[static_cast<std::size_t>(r)]);
  top += rungs * mod;
  std::size_t run = 0;
  for (std::int64_t x = 0; x <= top; x += p.d) {
    const std::int64_t v = p.value[static_cast<std::size_t>(x % mod)];
    const bool ok = v >= 0 && x >= v && (x - v) % mod == 0 && (x - v) / mod <= rungs;
    if (ok) {
      ++run;
      if (run > p.length) {
        p.length = run;
        p.start = x - static_cast<std::int64_t>(run - 1) * p.d;
      }
    } else {
      run = 0;
    }
  }
  if (p.length == 0) return std::nullopt;
  return p;
}

ProgressionWitness materialize(const Normalized& n, const Plan& p) {
  ProgressionWitness w;
  w.a = n.offset + p.start;
  w.d = p.d;
  w.length = p.length;
  w.decompositions.reserve(p.length);
  for (std::size_t t = 0; t < p.length; ++t) {
    const std::int64_t x = p.start + static_cast<std::int64_t>(t) * p.d;
    std::vector<std::int64_t> chosen(n.sets.size(), 0);
    std::int64_t r = x % p.mod;
    const std::int64_t rungs = (x - p.value[static_cast<std::size_t>(r)]) / p.mod;
    while (r != 0) {
      const auto idx = static_cast<std::size_t>(r);
      chosen[p.via_set[idx]] = p.via_elem[idx];
      r = p.via_prev[idx];
    }
    for (std::int64_t j = 0; j < rungs; ++j) chosen[p.ladder[static_cast<std::size_t>(j)]] = p.mod;
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] += n.mins[i];
    w.decompositions.push_back(std::move(chosen));
  }
  return w;
}

}  // namespace

ProgressionWitness find_progression(const std::vector<IntSet>& sets, std::size_t required_length,
                                    const ProgressionOptions& options) {
  if (sets.empty()) throw MalformedInput("find_progression needs at least one set");
  if (options.d0 < 1) throw ConfigError("d0 must be at least 1");
  const Normalized n = normalize(sets);

  std::vector<std::int64_t> candidates;
  for (const auto& s : n.sets) {
    for (auto x : s) {
      if (x > 0) candidates.push_back(x);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::optional<Plan> best;
  for (std::int64_t mod : candidates) {
    auto plan = plan_for(n, mod, options.d0);
    if (plan && (!best || plan->length > best->length)) best = std::move(plan);
  }

  std::optional<ProgressionWitness> witness;
  if (best) {
    witness = materialize(n, *best);
  } else {
    // No positive element anywhere: the only sum is Σ mins.
    ProgressionWitness w;
    w.a = n.offset;
    w.d = 1;
    w.length = 1;
    w.decompositions.push_back(n.mins);
    witness = std::move(w);
  }
  auto bad = progression_violations(sets, *witness, options.d0);
  if (!bad.empty()) throw Error("progression failed re-verification: " + bad.front());
  if (witness->length < required_length) throw InsufficientSets(required_length, std::move(witness));
  return *witness;
}

IntSet sumset_oracle(const std::vector<IntSet>& sets, std::size_t range_budget) {
  std::int64_t lo = 0;
  std::size_t range = 0;
  for (const auto& s : sets) {
    if (s.empty()) return {};
    const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    lo += *mn;
    range += static_cast<std::size_t>(*mx - *mn);
    if (range > range_budget) throw BudgetExceeded("sumset range exceeds budget");
  }
  const std::size_t words = words_for(range + 1);
  std::vector<std::uint64_t> reach(words, 0), next(words);
  reach[0] = 1;
  const auto& k = kernels::active();
  for (const auto& s : sets) {
    std::fill(next.begin(), next.end(), 0);
    const std::int64_t mn = *std::min_element(s.begin(), s.end());
    IntSet uniq = s;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto e : uniq) k.or_shifted(next.data(), reach.data(), words, static_cast<std::size_t>(e - mn));
    std::swap(reach, next);
  }
  IntSet out;
  VertexSet::from_words(range + 1, reach).for_each([&](Vertex v) { out.push_back(lo + static_cast<std::int64_t>(v)); });
  return out;
}

nlohmann::json to_json(const ProgressionWitness& w) {
  return {{"a", w.a}, {"d", w.d}, {"length", w.length}, {"decompositions", w.decompositions}};
}

}  // namespace bipsize
