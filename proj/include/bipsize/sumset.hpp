#pragma once

// Long arithmetic progressions inside K-fold sumsets A_1 + ... + A_K, with
// one explicit summand per set for every term.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bipsize/errors.hpp"

namespace bipsize {

using IntSet = std::vector<std::int64_t>;

/// {a + i d : 0 <= i < length}; decompositions[i][j] is the element of
/// sets[j] used for term i.
struct ProgressionWitness {
  std::int64_t a = 0;
  std::int64_t d = 1;
  std::size_t length = 0;
  std::vector<std::vector<std::int64_t>> decompositions;

  std::int64_t term(std::size_t i) const { return a + static_cast<std::int64_t>(i) * d; }
};

/// Empty when every term re-sums from members of the right sets and
/// 1 <= d <= d0.
std::vector<std::string> progression_violations(const std::vector<IntSet>& sets, const ProgressionWitness& w,
                                                std::int64_t d0);

struct ProgressionOptions {
  std::int64_t d0 = 6;
};

class InsufficientSets : public Error {
 public:
  InsufficientSets(std::size_t required, std::optional<ProgressionWitness> best);
  const std::optional<ProgressionWitness>& best() const { return best_; }

 private:
  std::optional<ProgressionWitness> best_;
};

/// Translate each set to start at 0; for every candidate common endpoint M'
/// saturate residues mod M' with sets that grow them, take the smallest
/// subgroup step d inside the saturated residues, then stack the remaining
/// {0, M'} sets into a ladder. Returns the longest verified progression
/// over all M'; throws InsufficientSets if it is shorter than required.
ProgressionWitness find_progression(const std::vector<IntSet>& sets, std::size_t required_length,
                                    const ProgressionOptions& options = {});

/// Exact A_1 + ... + A_K, sorted. Throws BudgetExceeded when the value range
/// exceeds `range_budget`.
IntSet sumset_oracle(const std::vector<IntSet>& sets, std::size_t range_budget = std::size_t{1} << 26);

nlohmann::json to_json(const ProgressionWitness& w);

}  // namespace bipsize
