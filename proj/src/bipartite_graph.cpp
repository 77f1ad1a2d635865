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

#include "expandlab/bipartite_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "expandlab/coset_search.hpp"
#include "expandlab/seeds.hpp"
#include "expandlab/stabilizer_code.hpp"

namespace expandlab {

BipartiteGraph::BipartiteGraph(std::size_t m, std::size_t n, std::vector<std::vector<std::size_t>> left_adjacency)
    : m_(m), n_(n), left_(std::move(left_adjacency)), right_(n) {
  if (left_.size() != m_) throw std::invalid_argument("adjacency list size must equal m");
  for (std::size_t l = 0; l < m_; ++l) {
    auto &adj = left_[l];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw std::invalid_argument("duplicate edge at constraint " + std::to_string(l));
    }
    for (auto r : adj) {
      if (r >= n_) throw std::invalid_argument("edge endpoint out of range at constraint " + std::to_string(l));
      right_[r].push_back(l);
    }
    max_left_ = std::max(max_left_, adj.size());
  }
  for (const auto &r : right_) max_right_ = std::max(max_right_, r.size());
}

BipartiteGraph BipartiteGraph::from_edges(std::size_t m, std::size_t n,
                                          const std::vector<std::pair<std::size_t, std::size_t>> &edges) {
  std::vector<std::vector<std::size_t>> adj(m);
  for (const auto &[l, r] : edges) {
    if (l >= m) throw std::invalid_argument("edge left endpoint out of range");
    adj[l].push_back(r);
  }
  return BipartiteGraph(m, n, std::move(adj));
}

bool BipartiteGraph::is_right_regular() const {
  return std::all_of(right_.begin(), right_.end(), [&](const auto &r) { return r.size() == max_right_; });
}

std::vector<std::pair<std::size_t, std::size_t>> BipartiteGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t l = 0; l < m_; ++l) {
    for (auto r : left_[l]) e.emplace_back(l, r);
  }
  return e;
}

BipartiteGraph from_code(const StabilizerCode &code) {
  return BipartiteGraph(code.num_generators(), code.n(), code.supports());
}

std::vector<std::size_t> neighborhood(const BipartiteGraph &g, const std::vector<std::size_t> &s) {
  std::vector<std::size_t> out;
  for (auto q : s) {
    const auto &c = g.constraints_on(q);
    out.insert(out.end(), c.begin(), c.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

Rational eps_from_counts(std::size_t distinct, std::size_t size, std::size_t d_r) {
  if (size == 0 || d_r == 0) return Rational(0);
  Rational e = Rational(1) - Rational(static_cast<std::int64_t>(distinct), static_cast<std::int64_t>(d_r * size));
  return e < Rational(0) ? Rational(0) : e;
}

std::uint64_t subsets_up_to(std::size_t n, std::size_t k) {
  std::uint64_t total = 0;
  for (std::size_t s = 1; s <= k && s <= n; ++s) {
    std::uint64_t c = binomial(n, s);
    if (total > UINT64_MAX - c) return UINT64_MAX;
    total += c;
  }
  return total;
}

// Depth-first enumeration of all subsets of size <= k whose smallest element is `first`, in
// lexicographic order, maintaining neighbour multiplicities incrementally.
class SubsetWalker {
 public:
  SubsetWalker(const BipartiteGraph &g, std::size_t k) : g_(g), k_(k), count_(g.m(), 0) {}

  template <class Visit>
  void run(std::size_t first, Visit &&visit) {
    set_.clear();
    push(first);
    recurse(visit);
    pop();
  }

  const std::vector<std::size_t> &set() const { return set_; }
  std::size_t distinct() const { return distinct_; }
  std::size_t multi() const { return multi_; }
  int count(std::size_t c) const { return count_[c]; }

 private:
  template <class Visit>
  void recurse(Visit &visit) {
    visit(*this);
    if (set_.size() >= k_) return;
    for (std::size_t q = set_.back() + 1; q < g_.n(); ++q) {
      push(q);
      recurse(visit);
      pop();
    }
  }

  void push(std::size_t q) {
    set_.push_back(q);
    for (auto c : g_.constraints_on(q)) {
      int &v = count_[c];
      ++v;
      if (v == 1) ++distinct_;
      if (v == 2) ++multi_;
    }
  }

  void pop() {
    std::size_t q = set_.back();
    set_.pop_back();
    for (auto c : g_.constraints_on(q)) {
      int &v = count_[c];
      if (v == 1) --distinct_;
      if (v == 2) --multi_;
      --v;
    }
  }

  const BipartiteGraph &g_;
  std::size_t k_;
  std::vector<int> count_;
  std::vector<std::size_t> set_;
  std::size_t distinct_ = 0;
  std::size_t multi_ = 0;
};

struct Candidate {
  bool has = false;
  std::size_t distinct = 0;
  std::size_t size = 1;
  std::vector<std::size_t> set;
  std::uint64_t examined = 0;
};

// True when (distinct_a / size_a) < (distinct_b / size_b), i.e. a has the larger error.
bool worse_expansion(std::size_t da, std::size_t sa, std::size_t db, std::size_t sb) { return da * sb < db * sa; }

void merge_candidate(Candidate &best, const Candidate &c) {
  best.examined += c.examined;
  if (!c.has) return;
  if (!best.has || worse_expansion(c.distinct, c.size, best.distinct, best.size) ||
      (!worse_expansion(best.distinct, best.size, c.distinct, c.size) && c.set < best.set)) {
    best.has = true;
    best.distinct = c.distinct;
    best.size = c.size;
    best.set = c.set;
  }
}

}  // namespace

Rational set_expansion_error(const BipartiteGraph &g, const std::vector<std::size_t> &s) {
  if (s.empty()) throw std::invalid_argument("expansion error of an empty set");
  std::vector<std::size_t> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return eps_from_counts(neighborhood(g, sorted).size(), sorted.size(), g.max_right_degree());
}

ExpansionReport expansion_error_exact(const BipartiteGraph &g, std::size_t k, unsigned threads,
                                      std::uint64_t budget) {
  if (k == 0) throw std::invalid_argument("max set size must be positive");
  const std::uint64_t total = subsets_up_to(g.n(), k);
  if (total > budget) throw BudgetExceeded("exact expansion enumeration exceeds budget");
  std::vector<Candidate> per_first(g.n());
  parallel_for(g.n(), threads, [&](std::size_t first) {
    SubsetWalker walker(g, k);
    Candidate &best = per_first[first];
    walker.run(first, [&](const SubsetWalker &w) {
      ++best.examined;
      const std::size_t sz = w.set().size();
      if (!best.has || worse_expansion(w.distinct(), sz, best.distinct, best.size)) {
        best.has = true;
        best.distinct = w.distinct();
        best.size = sz;
        best.set = w.set();
      }
    });
  });
  Candidate best;
  for (const auto &c : per_first) merge_candidate(best, c);
  ExpansionReport rep;
  rep.exact = true;
  rep.max_set_size = k;
  rep.sets_examined = best.examined;
  rep.right_regular = g.is_right_regular();
  if (best.has) {
    rep.eps = eps_from_counts(best.distinct, best.size, g.max_right_degree());
    rep.witness = best.set;
  }
  return rep;
}

ExpansionReport expansion_error_sampled(const BipartiteGraph &g, std::size_t k, std::uint64_t trials,
                                        std::uint64_t seed, unsigned threads) {
  if (k == 0) throw std::invalid_argument("max set size must be positive");
  const std::size_t kk = std::min(k, g.n());
  std::vector<Candidate> per_trial(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const std::size_t size = 1 + uniform_below(rng, kk);
    std::vector<std::size_t> pool(g.n());
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < size; ++i) {
      std::size_t j = i + uniform_below(rng, g.n() - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(s.begin(), s.end());
    Candidate &c = per_trial[t];
    c.has = true;
    c.examined = 1;
    c.distinct = neighborhood(g, s).size();
    c.size = size;
    c.set = std::move(s);
  });
  Candidate best;
  for (const auto &c : per_trial) merge_candidate(best, c);
  ExpansionReport rep;
  rep.exact = false;
  rep.trials = trials;
  rep.seed = seed;
  rep.max_set_size = k;
  rep.sets_examined = best.examined;
  rep.right_regular = g.is_right_regular();
  if (best.has) {
    rep.eps = eps_from_counts(best.distinct, best.size, g.max_right_degree());
    rep.witness = best.set;
  }
  return rep;
}

namespace {

std::vector<int> multiplicities(const BipartiteGraph &g, const std::vector<std::size_t> &s) {
  std::vector<int> count(g.m(), 0);
  for (auto q : s) {
    for (auto c : g.constraints_on(q)) ++count[c];
  }
  return count;
}

std::vector<std::size_t> normalized(const std::vector<std::size_t> &s, std::size_t n) {
  if (s.empty()) throw std::invalid_argument("set must be non-empty");
  std::vector<std::size_t> v = s;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.back() >= n) throw std::invalid_argument("qudit index out of range");
  return v;
}

}  // namespace

Rational multi_neighbor_fraction(const BipartiteGraph &g, const std::vector<std::size_t> &s_in) {
  auto s = normalized(s_in, g.n());
  auto count = multiplicities(g, s);
  std::int64_t distinct = 0, multi = 0;
  for (int c : count) {
    if (c >= 1) ++distinct;
    if (c >= 2) ++multi;
  }
  if (distinct == 0) return Rational(0);
  return Rational(multi, distinct);
}

bool check_fact_essence(const BipartiteGraph &g, const std::vector<std::size_t> &s) {
  Rational eps = set_expansion_error(g, s);
  if (eps >= Rational(1, 2)) return true;
  return multi_neighbor_fraction(g, s) <= 2 * eps;
}

BestQudit best_qudit(const BipartiteGraph &g, const std::vector<std::size_t> &s_in) {
  auto s = normalized(s_in, g.n());
  auto count = multiplicities(g, s);
  BestQudit best;
  bool has = false;
  for (auto q : s) {
    const auto &cs = g.constraints_on(q);
    std::int64_t multi = 0;
    for (auto c : cs) {
      if (count[c] >= 2) ++multi;
    }
    Rational f = cs.empty() ? Rational(0) : Rational(multi, static_cast<std::int64_t>(cs.size()));
    if (!has || f < best.fraction) {
      best.qudit = q;
      best.fraction = f;
      has = true;
    }
  }
  return best;
}

FactScan scan_expander_facts(const BipartiteGraph &g, std::size_t k, unsigned threads, std::uint64_t budget) {
  const std::uint64_t total = subsets_up_to(g.n(), k);
  if (total > budget) throw BudgetExceeded("expander fact scan exceeds budget");
  const std::int64_t d_r = static_cast<std::int64_t>(g.max_right_degree());
  std::vector<FactScan> per_first(g.n());
  parallel_for(g.n(), threads, [&](std::size_t first) {
    SubsetWalker walker(g, k);
    FactScan &scan = per_first[first];
    walker.run(first, [&](const SubsetWalker &w) {
      ++scan.sets_checked;
      const std::int64_t sz = static_cast<std::int64_t>(w.set().size());
      const std::int64_t distinct = static_cast<std::int64_t>(w.distinct());
      const std::int64_t full = d_r * sz;
      // eps < 1/2  <=>  2 |Gamma(S)| > D_R |S|.
      if (2 * distinct <= full) return;
      ++scan.sets_below_half;
      const std::int64_t slack = full - distinct;  // eps = slack / full
      bool bad = false;
      if (static_cast<std::int64_t>(w.multi()) * full > 2 * distinct * slack) {
        ++scan.essence_violations;
        bad = true;
      }
      // Best qudit: minimise multi_q / deg_q.
      std::int64_t best_num = 0, best_den = 0;
      bool has = false;
      for (auto q : w.set()) {
        const auto &cs = g.constraints_on(q);
        std::int64_t multi = 0;
        for (auto c : cs) {
          if (w.count(c) >= 2) ++multi;
        }
        std::int64_t deg = static_cast<std::int64_t>(cs.size());
        if (deg == 0) {
          multi = 0;
          deg = 1;
        }
        if (!has || multi * best_den < best_num * deg) {
          best_num = multi;
          best_den = deg;
          has = true;
        }
      }
      if (best_num * full > 2 * best_den * slack) {
        ++scan.degree_violations;
        bad = true;
      }
      if (bad && !scan.first_counterexample) scan.first_counterexample = w.set();
    });
  });
  FactScan total_scan;
  for (const auto &s : per_first) {
    total_scan.sets_checked += s.sets_checked;
    total_scan.sets_below_half += s.sets_below_half;
    total_scan.essence_violations += s.essence_violations;
    total_scan.degree_violations += s.degree_violations;
    if (!total_scan.first_counterexample && s.first_counterexample) {
      total_scan.first_counterexample = s.first_counterexample;
    }
  }
  return total_scan;
}

std::vector<std::size_t> gamma_t(const BipartiteGraph &g, std::size_t u, std::size_t t) {
  if (u >= g.m()) throw std::out_of_range("constraint index out of range");
  std::vector<char> in_set(g.n(), 0);
  std::vector<char> seen_constraint(g.m(), 0);
  std::vector<std::size_t> frontier = g.qudits_of(u);
  for (auto q : frontier) in_set[q] = 1;
  seen_constraint[u] = 1;
  for (std::size_t step = 0; step < t && !frontier.empty(); ++step) {
    std::vector<std::size_t> next;
    for (auto q : frontier) {
      for (auto c : g.constraints_on(q)) {
        if (seen_constraint[c]) continue;
        seen_constraint[c] = 1;
        for (auto r : g.qudits_of(c)) {
          if (!in_set[r]) {
            in_set[r] = 1;
            next.push_back(r);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < g.n(); ++q) {
    if (in_set[q]) out.push_back(q);
  }
  return out;
}

namespace {

bool pairwise_disjoint_balls(const BipartiteGraph &g, const std::vector<std::size_t> &u, std::size_t t) {
  std::vector<char> used(g.n(), 0);
  for (auto c : u) {
    if (c >= g.m()) return false;
    for (auto q : gamma_t(g, c, t)) {
      if (used[q]) return false;
      used[q] = 1;
    }
  }
  return true;
}

}  // namespace

std::vector<std::size_t> greedy_L_independent(const BipartiteGraph &g, std::size_t target) {
  if (target > g.m()) {
    throw TargetUnreachable("target " + std::to_string(target) + " exceeds the number of constraints", 0);
  }
  std::vector<char> used(g.n(), 0);
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < g.m(); ++c) {
    auto ball = gamma_t(g, c, 1);
    if (std::any_of(ball.begin(), ball.end(), [&](std::size_t q) { return used[q] != 0; })) continue;
    for (auto q : ball) used[q] = 1;
    chosen.push_back(c);
  }
  if (chosen.size() < target) {
    throw TargetUnreachable("greedy L-independent set reached only " + std::to_string(chosen.size()), chosen.size());
  }
  return chosen;
}

bool is_L_independent(const BipartiteGraph &g, const std::vector<std::size_t> &u) {
  return pairwise_disjoint_balls(g, u, 1);
}

std::vector<std::size_t> greedy_k_independent(const BipartiteGraph &g, std::size_t k, std::size_t target) {
  if (target > g.m()) {
    throw TargetUnreachable("target " + std::to_string(target) + " exceeds the number of constraints", 0);
  }
  std::vector<char> available(g.m(), 1);
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < g.m(); ++c) {
    if (!available[c]) continue;
    chosen.push_back(c);
    for (auto q : gamma_t(g, c, 2 * k)) {
      for (auto v : g.constraints_on(q)) available[v] = 0;
    }
  }
  if (chosen.size() < target) {
    throw TargetUnreachable("greedy k-independent set reached only " + std::to_string(chosen.size()), chosen.size());
  }
  return chosen;
}

bool is_k_independent(const BipartiteGraph &g, const std::vector<std::size_t> &u, std::size_t k) {
  return pairwise_disjoint_balls(g, u, k);
}

double eta_stated(std::size_t k, std::size_t d_r) {
  const double kk = static_cast<double>(k), dr = static_cast<double>(d_r);
  return std::pow(kk, -(2.0 * kk + 1.0)) * std::pow(dr, -(2.0 * kk - 1.0));
}

double eta_greedy(std::size_t k, std::size_t d_r) {
  const double kk = static_cast<double>(k), dr = static_cast<double>(d_r);
  return std::pow(kk, -2.0 * kk) * std::pow(dr, -2.0 * kk);
}

IsolationPenalty isolation_penalty(const BipartiteGraph &g, std::size_t constraint) {
  if (constraint >= g.m()) throw std::out_of_range("constraint index out of range");
  std::vector<int> shared(g.m(), 0);
  for (auto q : g.qudits_of(constraint)) {
    for (auto c : g.constraints_on(q)) ++shared[c];
  }
  IsolationPenalty p;
  for (std::size_t c = 0; c < g.m(); ++c) {
    if (c != constraint && shared[c] >= 2) p.removed.push_back(c);
  }
  p.count = p.removed.size();
  return p;
}

}  // namespace expandlab
