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
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "expandlab/code_zoo.hpp"
#include "expandlab/robustness.hpp"
#include "expandlab/seeds.hpp"

namespace expandlab {
namespace {

TEST(Robustness, AlphabetConstants) {
  EXPECT_EQ(alphabet_alpha(2), Rational(2, 3));
  EXPECT_EQ(alphabet_alpha(3), Rational(7, 8));
  EXPECT_EQ(pauli_share(2), Rational(1, 3));
  EXPECT_EQ(pauli_share(5), Rational(1, 24));
}

TEST(Robustness, MeasureRejectsCentralizerElements) {
  auto code = toric_code(3);
  EXPECT_THROW(measure_robustness(code, code.generator(0)), std::invalid_argument);
  auto m = measure_robustness(code, PauliOp::single(code.system(), toric_h_edge(3, 0, 1), 0, 1));
  EXPECT_EQ(m.coset_weight, 1u);
  EXPECT_EQ(m.penalty, 2u);
  EXPECT_EQ(m.robustness, Rational(1, 2));
}

TEST(Robustness, AdversarialSingleGenerator) {
  for (std::size_t L : {3u, 4u}) {
    auto code = toric_code(L);
    auto rep = expander_adversarial_error(code, {0}, distance(code).distance);
    EXPECT_EQ(rep.measurement.coset_weight, 1u);
    EXPECT_GE(rep.measurement.penalty, 1u);
    EXPECT_TRUE(rep.bound_applies);
    EXPECT_TRUE(rep.passed());
    EXPECT_TRUE(rep.half_distance_ok.value());
    EXPECT_FALSE(rep.density_ok);
  }
}

TEST(Robustness, AdversarialTwoFarPlaquettes) {
  auto code = toric_code(4);
  auto g = from_code(code);
  auto u = greedy_L_independent(g, 2);
  u.resize(2);
  auto rep = expander_adversarial_error(code, u, 4);
  // Oracles: syndrome count and coset search recomputed independently.
  EXPECT_EQ(rep.measurement.penalty, syndrome(code, rep.measurement.error).size());
  EXPECT_EQ(rep.measurement.coset_weight,
            coset_min_weight_brute(code, rep.measurement.error, CosetMode::centralizer, 2).value());
  std::vector<std::size_t> s = g.qudits_of(u[0]);
  s.insert(s.end(), g.qudits_of(u[1]).begin(), g.qudits_of(u[1]).end());
  std::sort(s.begin(), s.end());
  EXPECT_EQ(rep.eps, set_expansion_error(g, s));
  EXPECT_TRUE(rep.passed());
  if (rep.bound_applies) EXPECT_LE(rep.measurement.robustness, 2 * rep.eps);
  EXPECT_FALSE(rep.half_distance_ok.value());
}

TEST(Robustness, AdversarialPreconditions) {
  auto code = toric_code(3);
  EXPECT_THROW(expander_adversarial_error(code, {}), PreconditionError);
  EXPECT_THROW(expander_adversarial_error(code, {0, 1}), PreconditionError);
  EXPECT_THROW(expander_adversarial_error(code, {99}), PreconditionError);
}

TEST(Robustness, MajorityExample) {
  QuditSystem sys(3, 2);
  std::vector<PauliOp> gens{PauliOp(sys, {1, 1, 0}, {0, 0, 0}), PauliOp(sys, {1, 0, 1}, {0, 0, 0}),
                            PauliOp(sys, {0, 0, 0}, {1, 1, 1})};
  auto code = validate(gens);
  EXPECT_EQ(code.max_right_degree(), 3u);
  EXPECT_EQ(majority_restriction(code, 0), (std::pair<int, int>{1, 0}));
  auto rep = alphabet_error(code, {0});
  EXPECT_EQ(rep.chosen_qudits, std::vector<std::size_t>{0});
  EXPECT_EQ(rep.measurement.penalty, 1u);
  EXPECT_EQ(rep.penalty_bound, Rational(2));
  EXPECT_TRUE(rep.passed());
}

TEST(Robustness, MajorityWithUniformRestrictions) {
  QuditSystem sys(3, 2);
  PauliOp a(sys, {0, 0, 0}, {1, 1, 0}), b(sys, {0, 0, 0}, {0, 1, 1});
  auto code = validate({a, b});
  auto rep = alphabet_error(code, {0});
  EXPECT_EQ(rep.measurement.penalty, 0u);
}

TEST(Robustness, AlphabetOnToric) {
  auto code = toric_code(4);
  auto u = greedy_L_independent(from_code(code), 2);
  u.resize(2);
  auto rep = alphabet_error(code, u);
  EXPECT_EQ(rep.penalty_bound, Rational(16, 3));
  EXPECT_LE(rep.measurement.penalty, 5u);
  EXPECT_TRUE(rep.passed());
}

TEST(Robustness, SamplingEmptySupport) {
  QuditSystem sys(4, 2);
  EXPECT_TRUE(sample_random_error(sys, {{}, 0.5, 1}).is_identity_up_to_phase());
  EXPECT_THROW(sample_random_error(sys, {{0}, 1.5, 1}), std::invalid_argument);
  EXPECT_THROW(sample_random_error(sys, {{7}, 0.5, 1}), std::out_of_range);
}

TEST(Robustness, SamplingStatistics) {
  for (int d : {2, 3}) {
    QuditSystem sys(50, d);
    std::vector<std::size_t> all(50);
    for (std::size_t i = 0; i < 50; ++i) all[i] = i;
    const double p = 0.1;
    const int draws = 2000;
    std::map<std::pair<int, int>, std::uint64_t> per;
    std::uint64_t nonid = 0;
    for (int s = 0; s < draws; ++s) {
      auto e = sample_random_error(sys, {all, p, derive_seed(77, static_cast<std::uint64_t>(s))});
      for (std::size_t q = 0; q < 50; ++q) {
        if (e.acts_on(q)) {
          ++nonid;
          ++per[{e.x(q), e.z(q)}];
        }
      }
    }
    const double trials = 50.0 * draws;
    EXPECT_NEAR(static_cast<double>(nonid) / trials, p, 3 * std::sqrt(p * (1 - p) / trials));
    const double share = p / (d * d - 1);
    EXPECT_EQ(per.size(), static_cast<std::size_t>(d * d - 1));
    for (const auto &[key, c] : per) {
      EXPECT_NEAR(static_cast<double>(c) / trials, share, 3 * std::sqrt(share * (1 - share) / trials)) << d;
    }
  }
}

TEST(Robustness, SamplingDeterministic) {
  QuditSystem sys(10, 3);
  RandomErrorProcess proc{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 0.4, 123};
  EXPECT_EQ(sample_random_error(sys, proc), sample_random_error(sys, proc));
}

TEST(Robustness, PenaltyBounds) {
  auto b0 = expected_penalty_bounds(8, 4, 0.025, 2.0 / 3.0, 0.0, 4);
  EXPECT_DOUBLE_EQ(b0.corrected, b0.raw);
  EXPECT_FALSE(b0.final_applies);
  auto b = expected_penalty_bounds(8, 4, 1.0 / 40.0, 2.0 / 3.0, 0.32, 4);
  EXPECT_NEAR(b.corrected / b.raw, 1.0 - (1.0 / 40.0) * (2.0 / 3.0) * 0.32, 1e-15);
  EXPECT_NEAR(b.corrected / b.raw, 1.0 - 0.0053333333333333, 1e-12);
  EXPECT_DOUBLE_EQ(b.final_bound / b.raw, 0.995);
  EXPECT_TRUE(b.final_applies);
  auto z = expected_penalty_bounds(8, 4, 0.025, 0.0, 0.5, 4);
  EXPECT_EQ(z.raw, 0.0);
  EXPECT_EQ(z.corrected, 0.0);
  EXPECT_EQ(z.final_bound, 0.0);
}

TEST(Robustness, YOfK) {
  EXPECT_EQ(y_of_k(4), 0.9985);
  EXPECT_EQ(y_of_k(5), 0.9992);
  for (std::size_t k = 6; k <= 11; ++k) EXPECT_EQ(y_of_k(k), 0.9999);
  // k = 12: khat = 7, exponent = -6 log2(12) + 12 - 16.1 + 4.54.
  EXPECT_NEAR(y_of_k(12), 1.0 - std::pow(2.0, -6.0 * std::log2(12.0) + 0.44), 1e-12);
  EXPECT_THROW(y_of_k(3), std::invalid_argument);
}

TEST(Robustness, MonteCarloEmptyU) {
  MonteCarloOptions opt;
  opt.trials = 50;
  auto rep = monte_carlo_indexp(toric_code(3), {}, opt);
  EXPECT_EQ(rep.mean_penalty, 0.0);
  EXPECT_EQ(rep.mean_weight, 0.0);
  EXPECT_EQ(rep.computable, 50u);
}

TEST(Robustness, MonteCarloSmallRun) {
  auto code = toric_code(5);
  auto g = from_code(code);
  auto u = greedy_L_independent(g, 2);
  u.resize(2);
  MonteCarloOptions opt;
  opt.trials = 400;
  opt.seed = 9;
  auto rep = monte_carlo_indexp(code, u, opt);
  EXPECT_EQ(rep.S.size(), 8u);
  EXPECT_DOUBLE_EQ(rep.p, 1.0 / 40.0);
  EXPECT_TRUE(rep.corrected_3ci_holds);
  EXPECT_EQ(rep.oracle_mismatches, 0u);
  EXPECT_EQ(rep.oracle_checked, 400u);
  EXPECT_EQ(rep.computable + rep.uncomputable, 400u);
  opt.threads = 4;
  auto again = monte_carlo_indexp(code, u, opt);
  EXPECT_EQ(again.mean_penalty, rep.mean_penalty);
  EXPECT_EQ(again.stabilizer_weights, rep.stabilizer_weights);
}

// Brute-force onion oracle: enumerate the whole stabilizer group.
std::size_t onion_brute(const StabilizerCode &code, const std::vector<std::size_t> &region, const PauliOp &e) {
  const std::size_t m = code.num_generators();
  std::size_t best = SIZE_MAX;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    PauliOp p = e;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) p = multiply(p, code.generator(i));
    }
    std::size_t w = 0;
    for (auto q : region) w += p.acts_on(q);
    best = std::min(best, w);
  }
  return best;
}

TEST(Robustness, OnionMatchesBruteForce) {
  QuditSystem sys(6, 2);
  std::vector<PauliOp> gens{PauliOp(sys, {1, 1, 1, 1, 0, 0}, {0, 0, 0, 0, 0, 0}),
                            PauliOp(sys, {0, 0, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0}),
                            PauliOp(sys, {0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 0, 0}),
                            PauliOp(sys, {0, 0, 0, 0, 0, 0}, {0, 0, 1, 1, 1, 1})};
  auto code = validate(gens);
  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    PauliOp e(sys);
    for (auto q : code.supports()[0]) {
      if (uniform_below(rng, 2)) e.set(q, static_cast<int>(uniform_below(rng, 2)), static_cast<int>(uniform_below(rng, 2)));
    }
    for (std::size_t k : {1u, 2u}) {
      OnionOptions opt;
      opt.k = k;
      opt.check_hypotheses = false;
      auto rep = onion_min_restricted_weight(code, 0, e, opt);
      EXPECT_EQ(rep.min_weight, onion_brute(code, rep.region, e));
      ASSERT_TRUE(rep.representative);
      EXPECT_EQ(weight(*rep.representative), rep.min_weight);
    }
  }
}

TEST(Robustness, OnionToricFour) {
  auto code = toric_code(4);
  const auto &plaq = code.supports()[0];
  auto rep0 = onion_min_restricted_weight(code, 0, PauliOp(code.system()));
  EXPECT_EQ(rep0.min_weight, 0u);
  PauliOp one(code.system());
  one.set(plaq[0], 0, 1);
  auto rep1 = onion_min_restricted_weight(code, 0, one);
  EXPECT_GE(rep1.min_weight, 1u);
  EXPECT_TRUE(rep1.holds);
  EXPECT_TRUE(rep1.distance_hypothesis);
  EXPECT_TRUE(rep1.succinct_hypothesis);
  PauliOp two(code.system());
  two.set(plaq[0], 0, 1);
  two.set(plaq[1], 0, 1);
  auto rep2 = onion_min_restricted_weight(code, 0, two);
  EXPECT_EQ(rep2.bound, 2u);
  EXPECT_GE(rep2.min_weight, 2u);
  EXPECT_THROW(onion_min_restricted_weight(code, 0, PauliOp::single(code.system(), 31, 1, 0)), std::invalid_argument);
}

TEST(Robustness, ProfileMatchesBruteForce) {
  auto code = toric_code(3);
  auto rows = robustness_profile(code, 2);
  ASSERT_EQ(rows.size(), 2u);
  // Independent oracle: every word of weight <= 2 with its exact coset weight.
  for (std::size_t w = 1; w <= 2; ++w) {
    std::optional<Rational> best;
    for_each_word_of_weight(code.n(), 2, w, [&](const auto &, const auto &x, const auto &z) {
      PauliOp e(code.system(), x, z);
      auto cw = coset_min_weight_brute(code, e, CosetMode::centralizer, w);
      if (cw != w) return true;
      Rational r(static_cast<std::int64_t>(penalty(code, e)), static_cast<std::int64_t>(4 * w));
      if (!best || r < *best) best = r;
      return true;
    });
    EXPECT_EQ(rows[w - 1].min_robustness, best) << "w=" << w;
  }
  // Two generators are dropped, so an edge next to them sees only three checks.
  EXPECT_EQ(rows[0].min_robustness, Rational(1, 4));
  EXPECT_EQ(rows[1].min_robustness, Rational(1, 8));
  auto csv = profile_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "coset_weight,min_robustness,min_robustness_value,words");
  EXPECT_THROW(robustness_profile(code, 6, 1000), BudgetExceeded);
}

TEST(Robustness, ToricChainFormula) {
  // Away from the dropped generators, a chain of length l has penalty 2 and coset weight l.
  auto code = toric_code(5);
  for (std::size_t ell = 1; ell <= 3; ++ell) {
    auto m = measure_robustness(code, chain_error(5, staircase_path(5, {0, 0}, ell)));
    EXPECT_EQ(m.penalty, 2u);
    EXPECT_EQ(m.coset_weight, ell);
    EXPECT_EQ(m.robustness, Rational(2, static_cast<std::int64_t>(4 * ell)));
  }
}

}  // namespace
}  // namespace expandlab
