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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "expandlab/bipartite_graph.hpp"
#include "expandlab/code_zoo.hpp"
#include "expandlab/seeds.hpp"

namespace expandlab {
namespace {

BipartiteGraph disjoint_graph(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t i = 0; i < k; ++i) adj[l].push_back(l * k + i);
  return BipartiteGraph(m, m * k, adj);
}

// Independent oracle: all subsets by bitmask, eps as a rational.
Rational brute_eps(const BipartiteGraph &g, std::size_t k) {
  Rational best{0};
  for (std::uint32_t mask = 1; mask < (1u << g.n()); ++mask) {
    const std::size_t size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size > k) continue;
    std::set<std::size_t> nb;
    for (std::size_t r = 0; r < g.n(); ++r) {
      if (mask & (1u << r))
        for (auto c : g.constraints_on(r)) nb.insert(c);
    }
    Rational e = Rational(1) - Rational(static_cast<std::int64_t>(nb.size()),
                                        static_cast<std::int64_t>(g.max_right_degree() * size));
    best = std::max(best, e);
  }
  return best;
}

TEST(BipartiteGraph, Construction) {
  auto g = BipartiteGraph::from_edges(2, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}});
  EXPECT_EQ(g.m(), 2u);
  EXPECT_EQ(g.n(), 3u);
  EXPECT_EQ(g.max_right_degree(), 2u);
  EXPECT_FALSE(g.is_right_regular());
  EXPECT_EQ(g.constraints_on(1), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(BipartiteGraph(1, 2, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(BipartiteGraph(1, 2, {{5}}), std::invalid_argument);
}

TEST(BipartiteGraph, FromToricCode) {
  auto g = from_code(toric_code(3));
  EXPECT_EQ(g.m(), 16u);
  EXPECT_EQ(g.n(), 18u);
  EXPECT_EQ(g.max_left_degree(), 4u);
  EXPECT_EQ(g.max_right_degree(), 4u);
  // Two generators are dropped, so some qubits see only 3 checks.
  EXPECT_FALSE(g.is_right_regular());
  auto full = from_code(toric_code(4));
  EXPECT_EQ(full.m(), 30u);
}

TEST(BipartiteGraph, SingleConstraint) {
  BipartiteGraph g(1, 1, {{0}});
  EXPECT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(expansion_error_exact(g, 1).eps, Rational(0));
}

TEST(BipartiteGraph, ExpansionDisjointIsZero) {
  // One-local disjoint constraints: every qudit set expands perfectly.
  EXPECT_EQ(expansion_error_exact(disjoint_graph(4, 1), 3).eps, Rational(0));
  // With wider constraints a set inside one constraint only reaches a single check.
  auto wide = disjoint_graph(4, 3);
  EXPECT_EQ(expansion_error_exact(wide, 3).eps, Rational(2, 3));
  EXPECT_EQ(expansion_error_exact(wide, 3).eps, brute_eps(wide, 3));
}

TEST(BipartiteGraph, ExpansionIdenticalConstraints) {
  BipartiteGraph g(2, 3, {{0, 1, 2}, {0, 1, 2}});
  auto rep = expansion_error_exact(g, 3);
  // Three qubits see only two checks out of D_R * 3 = 6.
  EXPECT_EQ(rep.eps, Rational(2, 3));
  EXPECT_EQ(rep.eps, brute_eps(g, 3));
  EXPECT_EQ(set_expansion_error(g, rep.witness), rep.eps);
}

TEST(BipartiteGraph, ExpansionToricPlaquette) {
  auto code = toric_code(4);
  auto g = from_code(code);
  const auto &plaquette = g.qudits_of(0);
  auto nb = neighborhood(g, plaquette);
  EXPECT_EQ(set_expansion_error(g, plaquette),
            Rational(1) - Rational(static_cast<std::int64_t>(nb.size()), 16));
  auto rep = expansion_error_exact(g, 4);
  EXPECT_GE(rep.eps, set_expansion_error(g, plaquette));
  EXPECT_EQ(set_expansion_error(g, rep.witness), rep.eps);
}

TEST(BipartiteGraph, ExactMatchesBruteForceAndSampledIsBelow) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto g = random_left_regular_graph(6, 12, 3, seed);
    for (std::size_t k : {1u, 2u, 3u}) {
      auto exact = expansion_error_exact(g, k);
      EXPECT_EQ(exact.eps, brute_eps(g, k));
      EXPECT_EQ(set_expansion_error(g, exact.witness), exact.eps);
      auto sampled = expansion_error_sampled(g, k, 200, seed);
      EXPECT_LE(sampled.eps, exact.eps);
      EXPECT_EQ(set_expansion_error(g, sampled.witness), sampled.eps);
    }
  }
}

TEST(BipartiteGraph, ExpansionThreadIndependent) {
  auto g = random_left_regular_graph(10, 16, 4, 3);
  auto a = expansion_error_exact(g, 3, 1), b = expansion_error_exact(g, 3, 4);
  EXPECT_EQ(a.eps, b.eps);
  EXPECT_EQ(a.witness, b.witness);
  auto sa = expansion_error_sampled(g, 3, 300, 9, 1), sb = expansion_error_sampled(g, 3, 300, 9, 4);
  EXPECT_EQ(sa.witness, sb.witness);
}

TEST(BipartiteGraph, ExpansionBudget) {
  auto g = random_left_regular_graph(10, 30, 4, 1);
  EXPECT_THROW(expansion_error_exact(g, 10, 1, 1000), BudgetExceeded);
  EXPECT_THROW(expansion_error_exact(g, 0), std::invalid_argument);
}

TEST(BipartiteGraph, MultiNeighborFraction) {
  auto g = disjoint_graph(3, 2);
  EXPECT_EQ(multi_neighbor_fraction(g, {0, 2, 4}), Rational(0));
  EXPECT_THROW(multi_neighbor_fraction(g, {}), std::invalid_argument);
  auto t = from_code(toric_code(3));
  const auto &plaq = t.qudits_of(0);
  // Direct count: constraints touching the plaquette with >= 2 of its qubits.
  std::size_t multi = 0;
  auto nb = neighborhood(t, plaq);
  for (auto c : nb) {
    std::size_t hits = 0;
    for (auto q : t.qudits_of(c)) hits += std::count(plaq.begin(), plaq.end(), q);
    if (hits >= 2) ++multi;
  }
  EXPECT_EQ(multi_neighbor_fraction(t, plaq),
            Rational(static_cast<std::int64_t>(multi), static_cast<std::int64_t>(nb.size())));
}

TEST(BipartiteGraph, FactsHoldOnRandomGraphs) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_left_regular_graph(4 + uniform_below(rng, 8), 6 + uniform_below(rng, 8), 3, trial + 1);
    auto scan = scan_expander_facts(g, 3);
    EXPECT_EQ(scan.essence_violations, 0u);
    EXPECT_EQ(scan.degree_violations, 0u);
    // Spot-check the scan against the per-set functions.
    for (int s = 0; s < 5; ++s) {
      std::vector<std::size_t> set{uniform_below(rng, g.n()), uniform_below(rng, g.n())};
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      const Rational eps = set_expansion_error(g, set);
      if (eps < Rational(1, 2)) {
        EXPECT_TRUE(check_fact_essence(g, set));
        EXPECT_LE(best_qudit(g, set).fraction, 2 * eps);
      }
    }
  }
}

TEST(BipartiteGraph, BestQudit) {
  auto g = disjoint_graph(2, 2);
  EXPECT_EQ(best_qudit(g, {1}).fraction, Rational(0));
  // Qudit 0 shares three constraints with qudit 1; qudit 2 shares one and has a private one.
  BipartiteGraph h(5, 4, {{0, 1}, {0, 1}, {0, 1}, {1, 2, 3}, {2}});
  auto b = best_qudit(h, {0, 1, 2});
  EXPECT_EQ(b.qudit, 2u);
  EXPECT_EQ(b.fraction, Rational(1, 2));
  auto t = from_code(toric_code(3));
  const auto &plaq = t.qudits_of(0);
  const Rational eps = set_expansion_error(t, plaq);
  if (eps < Rational(1, 2)) EXPECT_LE(best_qudit(t, plaq).fraction, 2 * eps);
}

TEST(BipartiteGraph, GammaT) {
  auto t = from_code(toric_code(5));
  EXPECT_EQ(gamma_t(t, 0, 0), t.qudits_of(0));
  auto g1 = gamma_t(t, 0, 1);
  std::set<std::size_t> oracle;
  for (auto q : t.qudits_of(0))
    for (auto c : t.constraints_on(q))
      for (auto r : t.qudits_of(c)) oracle.insert(r);
  EXPECT_EQ(g1, std::vector<std::size_t>(oracle.begin(), oracle.end()));
  EXPECT_THROW(gamma_t(t, 1000, 0), std::out_of_range);
}

TEST(BipartiteGraph, LIndependent) {
  auto g = disjoint_graph(4, 2);
  EXPECT_EQ(greedy_L_independent(g, 4).size(), 4u);
  EXPECT_THROW(greedy_L_independent(g, 5), TargetUnreachable);
  auto t = from_code(toric_code(4));
  auto u = greedy_L_independent(t, 2);
  ASSERT_GE(u.size(), 2u);
  EXPECT_TRUE(is_L_independent(t, u));
  // Independent check: neighbourhood balls pairwise disjoint.
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      auto ba = gamma_t(t, u[a], 1), bb = gamma_t(t, u[b], 1);
      std::vector<std::size_t> inter;
      std::set_intersection(ba.begin(), ba.end(), bb.begin(), bb.end(), std::back_inserter(inter));
      EXPECT_TRUE(inter.empty());
    }
  try {
    greedy_L_independent(t, 30);
    FAIL() << "expected TargetUnreachable";
  } catch (const TargetUnreachable &e) {
    EXPECT_GE(e.achieved(), 2u);
  }
}

TEST(BipartiteGraph, KIndependent) {
  auto g = disjoint_graph(5, 3);
  EXPECT_EQ(greedy_k_independent(g, 3, 5).size(), 5u);
  auto r = random_left_regular_graph(20, 40, 3, 5);
  try {
    auto u = greedy_k_independent(r, 1, 1);
    EXPECT_TRUE(is_k_independent(r, u, 1));
  } catch (const TargetUnreachable &) {
    FAIL();
  }
  EXPECT_GT(eta_greedy(4, 4), eta_stated(4, 4) * 0);
  EXPECT_DOUBLE_EQ(eta_stated(2, 2), std::pow(2.0, -5) * std::pow(2.0, -3));
  EXPECT_DOUBLE_EQ(eta_greedy(2, 2), std::pow(2.0, -4) * std::pow(2.0, -4));
}

TEST(BipartiteGraph, KIndependentFractionBound) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = random_left_regular_graph(30, 60, 2, seed);
    std::size_t achieved = 0;
    try {
      achieved = greedy_k_independent(g, 2, g.m()).size();
    } catch (const TargetUnreachable &e) {
      achieved = e.achieved();
    }
    const double frac = static_cast<double>(achieved) / static_cast<double>(g.m());
    EXPECT_GE(frac, eta_greedy(2, g.max_right_degree()));
  }
}

TEST(BipartiteGraph, IsolationPenalty) {
  EXPECT_EQ(isolation_penalty(disjoint_graph(3, 2), 1).count, 0u);
  BipartiteGraph g(2, 3, {{0, 1}, {0, 1, 2}});
  EXPECT_EQ(isolation_penalty(g, 0).count, 1u);
  EXPECT_EQ(isolation_penalty(g, 1).count, 1u);
  auto t = from_code(toric_code(3));
  auto pen = isolation_penalty(t, 0);
  std::size_t oracle = 0;
  for (std::size_t c = 1; c < t.m(); ++c) {
    std::size_t shared = 0;
    for (auto q : t.qudits_of(c)) shared += std::count(t.qudits_of(0).begin(), t.qudits_of(0).end(), q);
    if (shared >= 2) ++oracle;
  }
  EXPECT_EQ(pen.count, oracle);
  EXPECT_EQ(pen.removed.size(), pen.count);
}

}  // namespace
}  // namespace expandlab
