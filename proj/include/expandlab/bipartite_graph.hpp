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

#ifndef EXPANDLAB_BIPARTITE_GRAPH_HPP
#define EXPANDLAB_BIPARTITE_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace expandlab {

using Rational = boost::rational<std::int64_t>;

class StabilizerCode;

/// Constraint (left) to qudit (right) incidence structure.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  /// left_adjacency[l] lists the qudits of constraint l; duplicates are rejected.
  BipartiteGraph(std::size_t m, std::size_t n, std::vector<std::vector<std::size_t>> left_adjacency);
  static BipartiteGraph from_edges(std::size_t m, std::size_t n,
                                   const std::vector<std::pair<std::size_t, std::size_t>> &edges);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  const std::vector<std::size_t> &qudits_of(std::size_t l) const { return left_[l]; }
  const std::vector<std::size_t> &constraints_on(std::size_t r) const { return right_[r]; }
  std::size_t left_degree(std::size_t l) const { return left_[l].size(); }
  std::size_t right_degree(std::size_t r) const { return right_[r].size(); }
  std::size_t max_left_degree() const { return max_left_; }
  /// D_R.
  std::size_t max_right_degree() const { return max_right_; }
  bool is_right_regular() const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> left_;
  std::vector<std::vector<std::size_t>> right_;
  std::size_t max_left_ = 0;
  std::size_t max_right_ = 0;
};

BipartiteGraph from_code(const StabilizerCode &code);

/// Gamma(S): constraints touching S, ascending.
std::vector<std::size_t> neighborhood(const BipartiteGraph &g, const std::vector<std::size_t> &s);

/// 1 - |Gamma(S)| / (D_R |S|), clamped at 0.
Rational set_expansion_error(const BipartiteGraph &g, const std::vector<std::size_t> &s);

struct ExpansionReport {
  Rational eps{0};
  std::vector<std::size_t> witness;
  bool exact = true;
  std::uint64_t sets_examined = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t max_set_size = 0;
  bool right_regular = true;
};

inline constexpr std::uint64_t kDefaultExpansionBudget = 50'000'000ULL;

/// Exact max over non-empty S with |S| <= k. Witness ties broken lexicographically.
ExpansionReport expansion_error_exact(const BipartiteGraph &g, std::size_t k, unsigned threads = 1,
                                      std::uint64_t budget = kDefaultExpansionBudget);
/// Lower bound from `trials` random sets of uniformly random size in [1, k].
ExpansionReport expansion_error_sampled(const BipartiteGraph &g, std::size_t k, std::uint64_t trials,
                                        std::uint64_t seed, unsigned threads = 1);

/// Fraction of Gamma(S) having at least two neighbours in S.
Rational multi_neighbor_fraction(const BipartiteGraph &g, const std::vector<std::size_t> &s);
/// multi_neighbor_fraction <= 2 eps(S) whenever eps(S) < 1/2 (vacuously true otherwise).
bool check_fact_essence(const BipartiteGraph &g, const std::vector<std::size_t> &s);

struct BestQudit {
  std::size_t qudit = 0;
  Rational fraction{0};
};

/// q in S minimising the fraction of q's constraints with >= 2 neighbours in S.
BestQudit best_qudit(const BipartiteGraph &g, const std::vector<std::size_t> &s);

struct FactScan {
  std::uint64_t sets_checked = 0;
  std::uint64_t sets_below_half = 0;
  std::uint64_t essence_violations = 0;
  std::uint64_t degree_violations = 0;
  std::optional<std::vector<std::size_t>> first_counterexample;
};

/// Checks both neighbour-multiplicity facts on every S with |S| <= k.
FactScan scan_expander_facts(const BipartiteGraph &g, std::size_t k, unsigned threads = 1,
                             std::uint64_t budget = kDefaultExpansionBudget);

class TargetUnreachable : public std::runtime_error {
 public:
  TargetUnreachable(const std::string &what, std::size_t achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  std::size_t achieved() const { return achieved_; }

 private:
  std::size_t achieved_;
};

/// Gamma^(t)(u): Gamma^(0) = Gamma(u); each step adds the qudits of constraints touching the set.
std::vector<std::size_t> gamma_t(const BipartiteGraph &g, std::size_t u, std::size_t t);

/// Lowest-index-first maximal set of constraints with pairwise qudit-disjoint Gamma^(1).
std::vector<std::size_t> greedy_L_independent(const BipartiteGraph &g, std::size_t target);
bool is_L_independent(const BipartiteGraph &g, const std::vector<std::size_t> &u);

/// Repeatedly picks the lowest available constraint and discards every constraint touching its
/// Gamma^(2k) neighbourhood.
std::vector<std::size_t> greedy_k_independent(const BipartiteGraph &g, std::size_t k, std::size_t target);
bool is_k_independent(const BipartiteGraph &g, const std::vector<std::size_t> &u, std::size_t k);

/// k^{-(2k+1)} D_R^{-(2k-1)}.
double eta_stated(std::size_t k, std::size_t d_r);
/// k^{-2k} D_R^{-2k}, the fraction guaranteed by the greedy argument.
double eta_greedy(std::size_t k, std::size_t d_r);

struct IsolationPenalty {
  std::size_t count = 0;
  std::vector<std::size_t> removed;
};

/// Constraints other than g sharing at least two qudits with g.
IsolationPenalty isolation_penalty(const BipartiteGraph &g, std::size_t constraint);

}  // namespace expandlab

#endif  // EXPANDLAB_BIPARTITE_GRAPH_HPP
