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

#ifndef EXPANDLAB_CLH_HPP
#define EXPANDLAB_CLH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expandlab/algebra.hpp"
#include "expandlab/bipartite_graph.hpp"
#include "expandlab/dense.hpp"

namespace expandlab {

struct ClhTerm {
  std::vector<std::size_t> support;  // sorted qudit indices
  dense::Mat matrix;                 // lexicographic over the support
};

/// Sum of commuting projectors on n qudits of dimension d.
struct CLHInstance {
  int d = 2;
  std::size_t n = 0;
  std::vector<ClhTerm> terms;
};

struct ClhTolerances {
  double proj = 1e-9;
  double comm = 1e-9;
  double num = 1e-8;
  double prune = 1e-7;  // identity-factor detection after several conjugations
};

struct ClhValidation {
  bool valid = true;
  std::vector<std::string> issues;
  double max_hermiticity_error = 0.0;
  double max_projector_error = 0.0;
  double max_commutator = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
};

ClhValidation validate_clh(const CLHInstance &instance, const ClhTolerances &tol = {});

/// Left vertex per term, edge when the term acts non-trivially on the qudit.
BipartiteGraph from_clh(const CLHInstance &instance, double tol = 1e-9);

/// Induced algebra of term `term` on qudit `qudit`.
std::vector<dense::Mat> induced_algebra(const CLHInstance &instance, std::size_t term, std::size_t qudit,
                                        double tol = 1e-8);

/// Full Hamiltonian as a dense matrix (test oracle).
dense::Mat dense_hamiltonian(const CLHInstance &instance, std::size_t max_rows = std::size_t{1} << 12);
double exact_ground_energy(const CLHInstance &instance, std::size_t max_rows = std::size_t{1} << 12);
double energy_of(const CLHInstance &instance, const dense::Vec &state);

// ---- Tear-away loop ----------------------------------------------------------------------------

struct LiveTerm {
  std::size_t origin = 0;  // index in the original instance
  std::vector<std::size_t> support;  // site ids, ascending
  dense::Mat matrix;
};

/// A site q split into q_left (kept by the isolated term) and q_right (kept by the rest).
struct SplitRecord {
  std::size_t parent = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  dense::Mat isometry;  // dim(parent) x dim(left)*dim(right)
};

struct LoopState {
  std::vector<int> site_dims;  // indexed by site id; ids < n are the original qudits
  std::vector<LiveTerm> remaining;
  std::vector<LiveTerm> good;
  std::vector<std::size_t> bad;
  std::vector<std::pair<std::size_t, double>> constants;  // terms pruned to a scalar
  std::vector<SplitRecord> splits;

  double constant_energy() const;
  /// Sum over sites touched by remaining terms of their dimension.
  std::size_t remaining_dimension() const;
};

struct IterationRecord {
  std::size_t chosen = 0;                // origin index of the isolated term
  std::vector<std::size_t> removed;      // origin indices moved to the bad set
  std::vector<QuditDecomposition> decompositions;  // one per site of the chosen term, in support order
  std::vector<std::size_t> chosen_blocks;
  std::vector<std::size_t> pruned_terms;  // origin indices that became scalars
  std::vector<double> pruned_values;
  std::size_t dimension_removed = 0;
  double reconstruction_error = 0.0;
  double commutation_error = 0.0;
};

struct DecompositionWitness {
  std::vector<IterationRecord> iterations;
  std::vector<std::size_t> good_terms;   // origin indices, in order of finalisation
  std::vector<std::size_t> good_levels;  // eigenvalue index per good term; 0 is the ground level
  std::vector<std::size_t> bad_terms;
  double claimed_energy = 0.0;
};

/// Initial loop state; trivial factors are pruned up front.
LoopState initial_state(const CLHInstance &instance, const ClhTolerances &tol = {});

bool has_intersections(const LoopState &state);
/// Positions (in state.remaining) of terms sharing at least two sites with remaining[v].
std::vector<std::size_t> overlap_set(const LoopState &state, std::size_t v);
/// Term choice: minimum isolation penalty, ties lowest position.
std::size_t choose_term(const LoopState &state);

struct PreparedStep {
  std::size_t v = 0;                  // position in remaining
  std::vector<std::size_t> removed;   // positions in remaining
  std::vector<QuditDecomposition> decompositions;
};

PreparedStep prepare_isolation(const LoopState &state, std::size_t v, const ClhTolerances &tol, std::uint64_t seed);

struct StepOutcome {
  LoopState state;
  IterationRecord record;
  std::vector<std::string> issues;  // structural checks that failed
};

/// Applies the isolation/isometry/prune step with the given block choice.
StepOutcome apply_isolation(const LoopState &state, const PreparedStep &step, const std::vector<std::size_t> &blocks,
                            const ClhTolerances &tol);

/// prepare_isolation followed by apply_isolation; throws DecompositionError on structural failure.
StepOutcome isolate_and_split(const LoopState &state, std::size_t v, const std::vector<std::size_t> &blocks,
                              const ClhTolerances &tol = {}, std::uint64_t seed = 1);

/// Moves every remaining term to the good set (valid once no two remaining terms intersect).
LoopState finalize(const LoopState &state);

/// Eigenvalue of level `level` of a good term.
double level_energy(const LiveTerm &term, std::size_t level);

/// Product of good-term eigenvectors and |0> elsewhere, pulled back through every split.
dense::Vec pull_back_state(const LoopState &final_state, std::size_t n, const std::vector<std::size_t> &levels);

enum class BlockStrategy { prover_indices, exhaustive };

struct ApproxOptions {
  BlockStrategy strategy = BlockStrategy::exhaustive;
  std::vector<std::vector<std::size_t>> prover_blocks;  // per iteration; missing entries mean block 0
  std::vector<std::size_t> levels;                      // per good term, default ground
  std::uint64_t leaf_budget = 100000;
  std::uint64_t seed = 1;
  ClhTolerances tol;
  std::size_t state_row_cap = std::size_t{1} << 20;
};

struct ApproxResult {
  DecompositionWitness witness;
  double energy = 0.0;            // of the pulled-back state on every original term
  double predicted_energy = 0.0;  // scalars plus good-term levels
  std::optional<dense::Vec> state;
  std::size_t iterations = 0;
  std::size_t num_terms = 0;
  std::size_t bad_count = 0;
  std::size_t locality = 0;
  Rational eps{0};
  double bad_bound = 0.0;  // 2 k d eps |L|
  bool bad_bound_holds = true;
  bool amortized_holds = true;
  bool search_exhausted = false;
  std::uint64_t leaves = 0;
  double max_reconstruction_error = 0.0;
  double max_commutation_error = 0.0;
};

ApproxResult approximate_ground(const CLHInstance &instance, const ApproxOptions &options = {});

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> issues;
  double energy = 0.0;
  double good_energy = 0.0;  // scalars plus good-term levels
  std::size_t bad_count = 0;
  bool energy_bound_holds = true;
  bool claimed_energy_matches = true;
  double max_isometry_error = 0.0;
  double max_invariance_error = 0.0;
};

VerifyReport verify_witness(const CLHInstance &instance, const DecompositionWitness &witness,
                            const ClhTolerances &tol = {}, std::size_t state_row_cap = std::size_t{1} << 20);

}  // namespace expandlab

#endif  // EXPANDLAB_CLH_HPP
