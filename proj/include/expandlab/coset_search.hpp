// Copyright 2026 The expandlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EXPANDLAB_COSET_SEARCH_HPP
#define EXPANDLAB_COSET_SEARCH_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "expandlab/zd_linalg.hpp"

namespace expandlab {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an unsigned budget from the environment, falling back to `fallback`.
std::uint64_t env_budget(const char *name, std::uint64_t fallback);

inline constexpr std::uint64_t kDefaultSearchBudget = 2'000'000'000ULL;
inline constexpr std::uint64_t kDefaultEnumBudget = 200'000'000ULL;

struct CosetSearchResult {
  std::size_t weight = 0;
  zd::Vec representative;  // symplectic vector of a minimum-weight word
  std::uint64_t nodes = 0;
};

/// Finds minimum-weight words w with symplectic(w, c_j) = target_j for a fixed list of check
/// vectors c_j. With checks spanning V^perp this is a minimum-weight search over a coset of V.
///
/// Depth-first search with iterative deepening. Each node branches on the unused qudits of one
/// unsatisfied check (the one with the smallest support), which keeps the search complete.
class CosetSolver {
 public:
  CosetSolver(std::size_t n, int d, const std::vector<zd::Vec> &checks);

  std::size_t num_qudits() const { return n_; }
  std::size_t num_checks() const { return checks_.size(); }

  /// Syndrome of a word with respect to the checks.
  std::vector<int> syndrome_of(const zd::Vec &word) const;

  /// Smallest weight <= cap, or nullopt when none exists up to cap.
  /// Throws BudgetExceeded after `node_budget` search nodes.
  std::optional<CosetSearchResult> min_weight(const std::vector<int> &target, std::size_t cap,
                                              std::uint64_t node_budget = kDefaultSearchBudget) const;

 private:
  struct Incidence {
    std::size_t check;
    int cx;
    int cz;
  };
  struct Check {
    std::vector<std::size_t> qudits;
  };

  bool dfs(std::vector<int> &residual, std::size_t &violated, std::vector<char> &used, zd::Vec &word,
           std::size_t depth_left, std::uint64_t &nodes, std::uint64_t budget) const;
  void apply(std::vector<int> &residual, std::size_t &violated, std::size_t q, int x, int z, int sign) const;

  std::size_t n_;
  int d_;
  std::vector<Check> checks_;
  std::vector<std::vector<Incidence>> by_qudit_;
  std::size_t max_qudit_degree_ = 1;
};

/// Calls fn(support, x, z) for every Pauli word of weight exactly w on n qudits, in lexicographic
/// order of supports and then of per-site exponent pairs. Stops early when fn returns false.
/// Returns false if stopped early.
bool for_each_word_of_weight(std::size_t n, int d, std::size_t w,
                             const std::function<bool(const std::vector<std::size_t> &, const std::vector<int> &,
                                                      const std::vector<int> &)> &fn);

/// Number of words of weight exactly w: C(n,w) (d^2-1)^w, saturating at UINT64_MAX.
std::uint64_t count_words_of_weight(std::size_t n, int d, std::size_t w);

std::uint64_t binomial(std::size_t n, std::size_t k);

}  // namespace expandlab

#endif  // EXPANDLAB_COSET_SEARCH_HPP
