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

#include "expandlab/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "expandlab/coset_search.hpp"
#include "expandlab/seeds.hpp"
#include "expandlab/zd_linalg.hpp"

namespace expandlab {

namespace {

std::string rational_text(const Rational &r) {
  std::ostringstream out;
  out << r.numerator();
  if (r.denominator() != 1) out << '/' << r.denominator();
  return out.str();
}

std::vector<std::size_t> union_of_supports(const StabilizerCode &code, const std::vector<std::size_t> &U) {
  std::set<std::size_t> s;
  for (auto u : U) {
    const auto &supp = code.supports().at(u);
    s.insert(supp.begin(), supp.end());
  }
  return {s.begin(), s.end()};
}

void require_independent_set(const StabilizerCode &code, const BipartiteGraph &g, const std::vector<std::size_t> &U) {
  if (U.empty()) throw PreconditionError("U is empty, so the constructed operator is the identity and not an error");
  for (auto u : U) {
    if (u >= code.num_generators()) throw PreconditionError("U contains an out-of-range generator index");
  }
  if (!is_L_independent(g, U)) throw PreconditionError("U is not L-independent");
}

std::size_t centralizer_weight(const StabilizerCode &code, const PauliOp &e) {
  auto cw = coset_min_weight(code, e, CosetMode::centralizer, weight(e));
  return cw.value_or(weight(e));
}

}  // namespace

Rational pauli_share(int d) {
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  return Rational(1, static_cast<std::int64_t>(d) * d - 1);
}

Rational alphabet_alpha(int d) { return Rational(1) - pauli_share(d); }

bool all_passed(const std::vector<Assertion> &assertions) {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion &a) { return a.passed; });
}

RobustnessMeasurement measure_robustness(const StabilizerCode &code, const PauliOp &e) {
  RobustnessMeasurement m;
  m.error = e;
  m.nominal_weight = weight(e);
  m.penalty = penalty(code, e);
  m.max_right_degree = code.max_right_degree();
  m.coset_weight = centralizer_weight(code, e);
  if (m.coset_weight == 0) throw std::invalid_argument("operator lies in the centralizer; it is not an error");
  m.robustness = Rational(static_cast<std::int64_t>(m.penalty),
                          static_cast<std::int64_t>(m.max_right_degree * m.coset_weight));
  return m;
}

AdversarialReport expander_adversarial_error(const StabilizerCode &code, const std::vector<std::size_t> &U,
                                             std::optional<std::size_t> known_distance) {
  const BipartiteGraph g = from_code(code);
  require_independent_set(code, g, U);
  AdversarialReport rep;
  rep.U = U;
  PauliOp e(code.system());
  for (auto u : U) {
    const auto &gu = g.qudits_of(u);
    std::size_t best = gu.front(), best_count = SIZE_MAX;
    for (auto q : gu) {
      std::size_t count = 0;
      for (auto c : g.constraints_on(q)) {
        std::size_t inside = 0;
        for (auto r : g.qudits_of(c)) {
          if (std::binary_search(gu.begin(), gu.end(), r)) ++inside;
        }
        if (inside >= 2) ++count;
      }
      if (count < best_count) {
        best_count = count;
        best = q;
      }
    }
    rep.chosen_qudits.push_back(best);
    const PauliOp &gen = code.generator(u);
    e.set(best, gen.x(best), gen.z(best));
  }

  auto &m = rep.measurement;
  m.error = e;
  m.nominal_weight = weight(e);
  m.penalty = penalty(code, e);
  m.max_right_degree = code.max_right_degree();
  m.coset_weight = centralizer_weight(code, e);
  if (m.coset_weight > 0) {
    m.robustness = Rational(static_cast<std::int64_t>(m.penalty),
                            static_cast<std::int64_t>(m.max_right_degree * m.coset_weight));
  }

  const auto S = union_of_supports(code, U);
  rep.eps = set_expansion_error(g, S);
  const auto usize = static_cast<std::int64_t>(U.size());
  const auto dr = static_cast<std::int64_t>(code.max_right_degree());
  rep.penalty_bound = Rational(2) * rep.eps * dr * usize;
  rep.bound_applies = rep.eps < Rational(1, 2);
  const auto k = static_cast<std::int64_t>(code.k());
  rep.density_ok = usize * k * k * k * dr < static_cast<std::int64_t>(code.n());
  if (known_distance) rep.half_distance_ok = 2 * U.size() < *known_distance;

  rep.assertions.push_back({"coset_weight_equals_U", m.coset_weight == U.size(),
                            "coset weight " + std::to_string(m.coset_weight) + ", |U| " + std::to_string(U.size())});
  if (rep.bound_applies) {
    rep.assertions.push_back({"penalty_within_2_eps_DR_U", Rational(static_cast<std::int64_t>(m.penalty)) <= rep.penalty_bound,
                              "penalty " + std::to_string(m.penalty) + ", bound " + rational_text(rep.penalty_bound)});
  } else {
    rep.assertions.push_back({"penalty_within_2_eps_DR_U", true,
                              "not applicable: eps " + rational_text(rep.eps) + " >= 1/2"});
  }
  return rep;
}

std::pair<int, int> majority_restriction(const StabilizerCode &code, std::size_t q) {
  if (q >= code.n()) throw std::out_of_range("qudit index out of range");
  std::map<std::pair<int, int>, std::size_t> counts;
  for (auto gi : code.generators_on(q)) {
    const auto &gen = code.generator(gi);
    ++counts[{gen.x(q), gen.z(q)}];
  }
  if (counts.empty()) throw std::invalid_argument("no generator acts on qudit " + std::to_string(q));
  std::pair<int, int> best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto &[key, c] : counts) {
    if (c > best_count) {
      best_count = c;
      best = key;
    }
  }
  return best;
}

AlphabetReport alphabet_error(const StabilizerCode &code, const std::vector<std::size_t> &U) {
  const BipartiteGraph g = from_code(code);
  require_independent_set(code, g, U);
  AlphabetReport rep;
  rep.U = U;
  PauliOp e(code.system());
  for (auto u : U) {
    const std::size_t q = code.supports()[u].front();
    auto [x, z] = majority_restriction(code, q);
    e.set(q, x, z);
    rep.chosen_qudits.push_back(q);
  }
  auto &m = rep.measurement;
  m.error = e;
  m.nominal_weight = weight(e);
  m.penalty = penalty(code, e);
  m.max_right_degree = code.max_right_degree();
  m.coset_weight = centralizer_weight(code, e);
  if (m.coset_weight > 0) {
    m.robustness = Rational(static_cast<std::int64_t>(m.penalty),
                            static_cast<std::int64_t>(m.max_right_degree * m.coset_weight));
  }
  rep.penalty_bound = alphabet_alpha(code.d()) * static_cast<std::int64_t>(code.max_right_degree()) *
                      static_cast<std::int64_t>(U.size());
  rep.assertions.push_back({"penalty_within_alpha_DR_U",
                            Rational(static_cast<std::int64_t>(m.penalty)) <= rep.penalty_bound,
                            "penalty " + std::to_string(m.penalty) + ", bound " + rational_text(rep.penalty_bound)});
  return rep;
}

PauliOp sample_random_error(QuditSystem system, const RandomErrorProcess &process) {
  if (process.p < 0.0 || process.p > 1.0) throw std::invalid_argument("error probability must lie in [0, 1]");
  PauliOp e(system);
  Rng rng(process.seed);
  const auto choices = static_cast<std::uint64_t>(system.d) * system.d - 1;
  for (auto q : process.support) {
    if (q >= system.n) throw std::out_of_range("error support outside the system");
    if (uniform_unit(rng) < process.p) {
      const auto c = static_cast<int>(1 + uniform_below(rng, choices));
      e.set(q, c / system.d, c % system.d);
    }
  }
  return e;
}

PenaltyBounds expected_penalty_bounds(std::size_t s_size, std::size_t d_r, double p, double alpha, double eps,
                                      std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  PenaltyBounds b;
  b.raw = p * static_cast<double>(s_size) * static_cast<double>(d_r) * alpha;
  b.corrected = b.raw * (1.0 - p * alpha * eps);
  b.final_bound = b.raw * (1.0 - 0.02 / static_cast<double>(k));
  b.final_applies = eps >= 0.32;
  return b;
}

double y_of_k(std::size_t k, double log_base) {
  if (k < 4) throw std::invalid_argument("y(k) is defined for k >= 4");
  if (k == 4) return 0.9985;
  if (k == 5) return 0.9992;
  if (k <= 11) return 0.9999;
  const double kk = static_cast<double>(k);
  const double khat = static_cast<double>(k / 2 + 1);
  const double lg = std::log(kk) / std::log(log_base);
  return 1.0 - std::pow(2.0, (-khat + 1.0) * lg + kk - 2.3 * khat + 4.54);
}

namespace {

struct TrialOutcome {
  std::size_t penalty = 0;
  std::optional<std::size_t> stabilizer_weight;
  std::optional<std::size_t> centralizer_weight;
  bool oracle_checked = false;
  bool oracle_ok = true;
};

// Counts generators whose restriction to the shared qudits fails to commute with e, using matrices.
std::optional<std::size_t> dense_penalty(const StabilizerCode &code, const PauliOp &e, std::size_t max_qudits) {
  std::set<std::size_t> gens;
  for (auto q : e.support()) {
    for (auto gi : code.generators_on(q)) gens.insert(gi);
  }
  std::size_t count = 0;
  for (auto gi : gens) {
    const auto &gen = code.generator(gi);
    std::vector<std::size_t> shared;
    for (auto q : e.support()) {
      if (gen.acts_on(q)) shared.push_back(q);
    }
    if (shared.size() > max_qudits) return std::nullopt;
    const QuditSystem local(shared.size(), code.d());
    PauliOp a(local), b(local);
    for (std::size_t i = 0; i < shared.size(); ++i) {
      a.set(i, gen.x(shared[i]), gen.z(shared[i]));
      b.set(i, e.x(shared[i]), e.z(shared[i]));
    }
    const auto ma = to_matrix(a), mb = to_matrix(b);
    if ((ma * mb - mb * ma).cwiseAbs().maxCoeff() > 1e-9) ++count;
  }
  return count;
}

}  // namespace

MonteCarloReport monte_carlo_indexp(const StabilizerCode &code, const std::vector<std::size_t> &U,
                                    const MonteCarloOptions &opt) {
  const BipartiteGraph g = from_code(code);
  for (auto u : U) {
    if (u >= code.num_generators()) throw PreconditionError("U contains an out-of-range generator index");
  }
  MonteCarloReport rep;
  rep.U = U;
  rep.k = opt.k ? opt.k : code.k();
  rep.p = 1.0 / (10.0 * static_cast<double>(rep.k));
  rep.S = union_of_supports(code, U);
  rep.alpha = alphabet_alpha(code.d());
  rep.eps = rep.S.empty() ? Rational(0) : set_expansion_error(g, rep.S);
  rep.gamma_s_size = neighborhood(g, rep.S).size();
  rep.k_independent = U.empty() || is_k_independent(g, U, rep.k);
  rep.l_independent = U.empty() || is_L_independent(g, U);
  rep.trials = opt.trials;
  rep.seed = opt.seed;
  rep.y = y_of_k(rep.k, opt.log_base);
  rep.weight_threshold = static_cast<double>(rep.S.size()) * rep.p * rep.y;
  rep.delta = static_cast<double>(U.size()) / (10.0 * static_cast<double>(code.n()));

  std::vector<TrialOutcome> out(opt.trials);
  parallel_for(opt.trials, opt.threads, [&](std::size_t t) {
    RandomErrorProcess proc{rep.S, rep.p, derive_seed(opt.seed, static_cast<std::uint64_t>(t))};
    const PauliOp e = sample_random_error(code.system(), proc);
    TrialOutcome &o = out[t];
    o.penalty = penalty(code, e);
    try {
      o.stabilizer_weight = coset_min_weight(code, e, CosetMode::stabilizer, opt.coset_cap);
      o.centralizer_weight = coset_min_weight(code, e, CosetMode::centralizer, opt.coset_cap);
    } catch (const BudgetExceeded &) {
      o.stabilizer_weight.reset();
      o.centralizer_weight.reset();
    }
    if (opt.dense_oracle) {
      if (auto dp = dense_penalty(code, e, opt.dense_oracle_max_qudits)) {
        o.oracle_checked = true;
        o.oracle_ok = *dp == o.penalty;
      }
    }
  });

  std::uint64_t penalty_sum = 0, weight_sum = 0;
  for (const auto &o : out) {
    penalty_sum += o.penalty;
    if (o.oracle_checked) {
      ++rep.oracle_checked;
      if (!o.oracle_ok) ++rep.oracle_mismatches;
    }
    if (o.centralizer_weight) ++rep.centralizer_weights[*o.centralizer_weight];
    if (!o.stabilizer_weight) {
      ++rep.uncomputable;
      continue;
    }
    const std::size_t w = *o.stabilizer_weight;
    ++rep.computable;
    ++rep.stabilizer_weights[w];
    weight_sum += w;
    if (static_cast<double>(w) >= rep.weight_threshold) ++rep.above_threshold;
    const double dp = static_cast<double>(w) / static_cast<double>(code.n());
    if (dp > 0.099 * rep.delta && dp < 0.101 * rep.delta) ++rep.in_delta_window;
  }
  if (opt.trials > 0) {
    const double n_trials = static_cast<double>(opt.trials);
    rep.mean_penalty = static_cast<double>(penalty_sum) / n_trials;
    rep.half_width = static_cast<double>(rep.gamma_s_size) *
                     std::sqrt(std::log(2.0 / opt.confidence_delta) / (2.0 * n_trials));
  }
  if (rep.computable > 0) {
    rep.above_fraction = static_cast<double>(rep.above_threshold) / static_cast<double>(rep.computable);
    rep.mean_weight = static_cast<double>(weight_sum) / static_cast<double>(rep.computable);
  }
  rep.bounds = expected_penalty_bounds(rep.S.size(), code.max_right_degree(), rep.p,
                                       boost::rational_cast<double>(rep.alpha), boost::rational_cast<double>(rep.eps),
                                       rep.k);
  rep.corrected_holds = rep.mean_penalty - rep.half_width <= rep.bounds.corrected;
  rep.corrected_3ci_holds = rep.mean_penalty <= rep.bounds.corrected + 3.0 * rep.half_width;
  if (rep.bounds.final_applies) rep.final_holds = rep.mean_penalty - rep.half_width <= rep.bounds.final_bound;
  return rep;
}

OnionReport onion_min_restricted_weight(const StabilizerCode &code, std::size_t u, const PauliOp &e,
                                        const OnionOptions &opt) {
  if (u >= code.num_generators()) throw std::out_of_range("generator index out of range");
  if (!(e.system() == code.system())) throw std::invalid_argument("error acts on a different system");
  const auto &gu = code.supports()[u];
  for (auto q : e.support()) {
    if (!std::binary_search(gu.begin(), gu.end(), q)) {
      throw std::invalid_argument("error acts outside the generator's support");
    }
  }
  const BipartiteGraph g = from_code(code);
  OnionReport rep;
  rep.u = u;
  rep.k = opt.k ? opt.k : code.k();
  rep.i = weight(e);
  rep.bound = rep.i <= rep.k ? std::min(rep.i, rep.k - rep.i) : 0;
  rep.region = gamma_t(g, u, rep.k);
  const std::size_t r = rep.region.size();
  const int d = code.d();

  std::vector<zd::Vec> projected;
  for (std::size_t gi = 0; gi < code.num_generators(); ++gi) {
    const auto &gen = code.generator(gi);
    zd::Vec v(2 * r, 0);
    bool any = false;
    for (std::size_t j = 0; j < r; ++j) {
      v[j] = gen.x(rep.region[j]);
      v[r + j] = gen.z(rep.region[j]);
      any = any || v[j] != 0 || v[r + j] != 0;
    }
    if (any) projected.push_back(std::move(v));
  }
  const auto checks = zd::symplectic_complement(projected, r, d);
  const CosetSolver solver(r, d, checks);
  zd::Vec target_word(2 * r, 0);
  for (std::size_t j = 0; j < r; ++j) {
    target_word[j] = e.x(rep.region[j]);
    target_word[r + j] = e.z(rep.region[j]);
  }
  const auto target = solver.syndrome_of(target_word);
  const auto budget = env_budget("EXPANDLAB_SEARCH_BUDGET", opt.node_budget);
  auto res = solver.min_weight(target, rep.i, budget);
  if (!res) throw std::logic_error("restricted coset search missed the error itself");
  rep.min_weight = res->weight;
  PauliOp rep_op(code.system());
  for (std::size_t j = 0; j < r; ++j) {
    rep_op.set(rep.region[j], res->representative[j], res->representative[r + j]);
  }
  rep.representative = rep_op;
  rep.holds = rep.min_weight >= rep.bound;
  if (opt.check_hypotheses) {
    rep.distance_hypothesis = rep.k <= 1 || !distance(code, rep.k - 1).distance.has_value();
    rep.succinct_hypothesis = has_group_weight_at_least(code, rep.k);
  }
  return rep;
}

std::vector<ProfileRow> robustness_profile(const StabilizerCode &code, std::size_t cap, std::uint64_t budget) {
  budget = env_budget("EXPANDLAB_ENUM_BUDGET", budget);
  std::uint64_t total = 0;
  for (std::size_t w = 1; w <= cap && w <= code.n(); ++w) {
    total += count_words_of_weight(code.n(), code.d(), w);
    if (total > budget) throw BudgetExceeded("robustness profile enumeration exceeds the budget");
  }
  const auto dr = static_cast<std::int64_t>(code.max_right_degree());
  std::vector<ProfileRow> rows;
  for (std::size_t w = 1; w <= cap; ++w) {
    ProfileRow row;
    row.w = w;
    if (w > code.n()) {
      rows.push_back(row);
      continue;
    }
    std::size_t best = SIZE_MAX;
    for_each_word_of_weight(code.n(), code.d(), w,
                            [&](const std::vector<std::size_t> &, const std::vector<int> &x, const std::vector<int> &z) {
                              ++row.words;
                              PauliOp cand(code.system(), x, z);
                              const std::size_t pen = penalty(code, cand);
                              if (pen >= best) return true;
                              // Minimal in its coset exactly when nothing lighter shares the syndrome.
                              if (w > 1 && coset_min_weight(code, cand, CosetMode::centralizer, w - 1)) return true;
                              if (pen == 0) return true;  // centralizer element: not an error
                              best = pen;
                              row.witness = cand;
                              return true;
                            });
    if (best != SIZE_MAX) row.min_robustness = Rational(static_cast<std::int64_t>(best), dr * static_cast<std::int64_t>(w));
    rows.push_back(row);
  }
  return rows;
}

std::string profile_csv(const std::vector<ProfileRow> &rows) {
  std::ostringstream out;
  out << "coset_weight,min_robustness,min_robustness_value,words\n";
  for (const auto &r : rows) {
    out << r.w << ',';
    if (r.min_robustness) {
      out << rational_text(*r.min_robustness) << ',' << boost::rational_cast<double>(*r.min_robustness);
    } else {
      out << ',';
    }
    out << ',' << r.words << '\n';
  }
  return out.str();
}

}  // namespace expandlab
