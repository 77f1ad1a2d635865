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

#ifndef EXPANDLAB_ROBUSTNESS_HPP
#define EXPANDLAB_ROBUSTNESS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "expandlab/bipartite_graph.hpp"
#include "expandlab/pauli.hpp"
#include "expandlab/stabilizer_code.hpp"

namespace expandlab {

/// t(d) = 1 / (d^2 - 1), the share of each non-identity single-qudit Pauli.
Rational pauli_share(int d);
/// alpha(d) = 1 - t(d).
Rational alphabet_alpha(int d);

struct RobustnessMeasurement {
  PauliOp error{QuditSystem{}};
  std::size_t nominal_weight = 0;
  std::size_t coset_weight = 0;  // centralizer mode
  std::size_t penalty = 0;
  std::size_t max_right_degree = 0;
  Rational robustness{0};  // penalty / (D_R * coset_weight)
};

/// Throws std::invalid_argument when e lies in the centralizer (not an error).
RobustnessMeasurement measure_robustness(const StabilizerCode &code, const PauliOp &e);

struct Assertion {
  std::string name;
  bool passed = true;
  std::string detail;
};

bool all_passed(const std::vector<Assertion> &assertions);

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AdversarialReport {
  std::vector<std::size_t> U;
  std::vector<std::size_t> chosen_qudits;
  RobustnessMeasurement measurement;
  Rational eps{0};  // expansion error of the qudit set Gamma(U)
  Rational penalty_bound{0};
  bool bound_applies = false;  // eps < 1/2
  bool density_ok = false;     // |U| k^3 D_R < n
  std::optional<bool> half_distance_ok;
  std::vector<Assertion> assertions;
  bool passed() const { return all_passed(assertions); }
};

/// Per u in U, the qudit of Gamma(u) touched by the fewest constraints that have >= 2 qudits in
/// Gamma(u) (u included, ties to the lowest index); the error is u restricted to those qudits.
/// U must be non-empty and L-independent.
AdversarialReport expander_adversarial_error(const StabilizerCode &code, const std::vector<std::size_t> &U,
                                             std::optional<std::size_t> known_distance = std::nullopt);

struct AlphabetReport {
  std::vector<std::size_t> U;
  std::vector<std::size_t> chosen_qudits;
  RobustnessMeasurement measurement;
  Rational penalty_bound{0};  // alpha(d) D_R |U|
  std::vector<Assertion> assertions;
  bool passed() const { return all_passed(assertions); }
};

/// Most frequent restriction to q among the generators on q; ties to the lowest (x, z).
std::pair<int, int> majority_restriction(const StabilizerCode &code, std::size_t q);

/// Majority Pauli on the first qudit of each u in U.
AlphabetReport alphabet_error(const StabilizerCode &code, const std::vector<std::size_t> &U);

struct RandomErrorProcess {
  std::vector<std::size_t> support;
  double p = 0.0;
  std::uint64_t seed = 0;
};

/// Independent per-qudit draw: identity w.p. 1 - p, each non-identity Pauli w.p. p / (d^2 - 1).
PauliOp sample_random_error(QuditSystem system, const RandomErrorProcess &process);

struct PenaltyBounds {
  double raw = 0.0;        // p |S| D_R alpha
  double corrected = 0.0;  // raw (1 - p alpha eps)
  double final_bound = 0.0;  // raw (1 - 0.02 / k)
  bool final_applies = false;  // eps >= 0.32
};

PenaltyBounds expected_penalty_bounds(std::size_t s_size, std::size_t d_r, double p, double alpha, double eps,
                                      std::size_t k);

/// Tabulated for 4 <= k <= 11; closed form above. Throws for k < 4.
double y_of_k(std::size_t k, double log_base = 2.0);

struct MonteCarloOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::size_t k = 0;  // 0: the code's locality
  std::size_t coset_cap = 8;
  double confidence_delta = 0.01;
  double log_base = 2.0;
  std::size_t dense_oracle_max_qudits = 12;
  bool dense_oracle = true;
  unsigned threads = 1;
};

struct MonteCarloReport {
  std::vector<std::size_t> U;
  std::vector<std::size_t> S;
  std::size_t k = 0;
  double p = 0.0;
  Rational alpha{0};
  Rational eps{0};
  std::size_t gamma_s_size = 0;
  bool k_independent = false;
  bool l_independent = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  double mean_penalty = 0.0;
  double half_width = 0.0;
  PenaltyBounds bounds;
  bool corrected_holds = false;     // mean - half_width <= corrected
  bool corrected_3ci_holds = false; // mean <= corrected + 3 half_width
  bool final_holds = true;          // only checked when bounds.final_applies

  double y = 0.0;
  double weight_threshold = 0.0;  // |S| p y(k)
  std::uint64_t computable = 0;
  std::uint64_t uncomputable = 0;
  std::uint64_t above_threshold = 0;  // stabilizer-mode weight >= threshold
  double above_fraction = 0.0;
  double mean_weight = 0.0;
  std::map<std::size_t, std::uint64_t> stabilizer_weights;
  std::map<std::size_t, std::uint64_t> centralizer_weights;

  double delta = 0.0;  // |U| / (10 n)
  std::uint64_t in_delta_window = 0;

  std::uint64_t oracle_checked = 0;
  std::uint64_t oracle_mismatches = 0;
};

MonteCarloReport monte_carlo_indexp(const StabilizerCode &code, const std::vector<std::size_t> &U,
                                    const MonteCarloOptions &options);

struct OnionReport {
  std::size_t u = 0;
  std::size_t i = 0;
  std::size_t k = 0;
  std::vector<std::size_t> region;
  std::size_t min_weight = 0;
  std::optional<PauliOp> representative;  // on the region, as a full-system operator
  std::size_t bound = 0;  // min(i, k - i)
  bool holds = false;
  bool distance_hypothesis = false;
  bool succinct_hypothesis = false;
};

struct OnionOptions {
  std::size_t k = 0;  // 0: the code's locality
  std::uint64_t node_budget = kDefaultSearchBudget;
  bool check_hypotheses = true;
};

/// min over Delta in the stabilizer group of wt((Delta E) restricted to Gamma^{(k)}(u)).
/// E must be supported on the qudits of generator u.
OnionReport onion_min_restricted_weight(const StabilizerCode &code, std::size_t u, const PauliOp &e,
                                        const OnionOptions &options = {});

struct ProfileRow {
  std::size_t w = 0;
  std::optional<Rational> min_robustness;  // nullopt: no error has coset weight w
  std::optional<PauliOp> witness;
  std::uint64_t words = 0;
};

/// Exact r at each coset weight w = 1..cap, by enumeration of all words of weight w.
std::vector<ProfileRow> robustness_profile(const StabilizerCode &code, std::size_t cap,
                                           std::uint64_t budget = kDefaultEnumBudget);
std::string profile_csv(const std::vector<ProfileRow> &rows);

}  // namespace expandlab

#endif  // EXPANDLAB_ROBUSTNESS_HPP
