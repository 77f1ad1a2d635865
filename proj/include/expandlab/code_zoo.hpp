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

#ifndef EXPANDLAB_CODE_ZOO_HPP
#define EXPANDLAB_CODE_ZOO_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "expandlab/bipartite_graph.hpp"
#include "expandlab/clh.hpp"
#include "expandlab/pauli.hpp"
#include "expandlab/stabilizer_code.hpp"

namespace expandlab {

// Toric code on an L x L torus. Vertex (i, j) has a horizontal edge to (i, j+1) and a
// vertical edge to (i+1, j), both mod L.
std::size_t toric_h_edge(std::size_t L, std::size_t i, std::size_t j);
std::size_t toric_v_edge(std::size_t L, std::size_t i, std::size_t j);
std::size_t toric_num_qubits(std::size_t L);

/// Plaquettes (Z type) for (i, j) in row-major order, then stars (X type); the generators
/// at (L-1, L-1) of each type are dropped so the list is independent.
std::vector<PauliOp> toric_generators(std::size_t L);
StabilizerCode toric_code(std::size_t L);

/// Index of the plaquette / star generator at (i, j) in toric_generators(L); nullopt for a dropped one.
std::optional<std::size_t> toric_plaquette_index(std::size_t L, std::size_t i, std::size_t j);
std::optional<std::size_t> toric_star_index(std::size_t L, std::size_t i, std::size_t j);

using LatticeSite = std::pair<std::size_t, std::size_t>;

enum class ChainKind {
  z_primal,  // Z on primal edges; path given as vertices, violates the end stars
  x_dual,    // X on the edges crossed by a dual path; path given as plaquettes
};

/// Error along a lattice path. Consecutive sites must be torus neighbors and no edge may repeat.
PauliOp chain_error(std::size_t L, const std::vector<LatticeSite> &path, ChainKind kind = ChainKind::z_primal);

/// Path of `length` steps from `start`, alternating right and down.
std::vector<LatticeSite> staircase_path(std::size_t L, LatticeSite start, std::size_t length);

/// `count` staircase chains of length ell, starting at rows 0, ell + spacing, ...; every pair of
/// chains is at torus distance >= spacing.
PauliOp scattered_chains(std::size_t L, std::size_t ell, std::size_t spacing, std::size_t count,
                         ChainKind kind = ChainKind::z_primal);

/// Classical parity-check code: one parity check per left vertex.
struct ClassicalParityCode {
  BipartiteGraph graph;
};

ClassicalParityCode classical_parity_code(BipartiteGraph graph);

/// Checks with odd overlap with the bit set `ones`.
std::size_t violated_checks(const ClassicalParityCode &code, const std::vector<std::size_t> &ones);
/// Checks seeing exactly one bit of `ones`.
std::size_t unique_neighbor_checks(const ClassicalParityCode &code, const std::vector<std::size_t> &ones);

struct ClassicalCheckReport {
  Rational eps{0};
  std::size_t max_weight = 0;
  std::size_t max_right_degree = 0;
  bool right_regular = true;
  Rational average_left_degree{0};
  std::uint64_t sets_checked = 0;
  std::uint64_t bound_failures = 0;
  std::optional<std::vector<std::size_t>> bound_counterexample;
  // Sets rejected by no check at all (only meaningful when eps < 1/2).
  std::uint64_t distance_failures = 0;
  std::optional<std::vector<std::size_t>> distance_counterexample;
  bool holds() const { return bound_failures == 0 && distance_failures == 0; }
};

/// Exhaustive over all non-empty bit sets of size <= max_weight: violated checks >= |S| D_R (1 - 3 eps),
/// and, when eps < 1/2, some check sees exactly one bit.
ClassicalCheckReport classical_robustness_check(const ClassicalParityCode &code, std::size_t max_weight,
                                                unsigned threads = 1);

/// Random graph where each left vertex picks `left_degree` distinct right vertices uniformly.
BipartiteGraph random_left_regular_graph(std::size_t m, std::size_t n, std::size_t left_degree, std::uint64_t seed);

struct RandomCssOptions {
  std::size_t n = 16;
  std::size_t k = 4;
  std::size_t right_degree = 4;
  std::size_t min_distance = 3;
  std::size_t max_attempts = 2000;
};

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random CSS code over qubits with weight-k X and Z generators. X supports are drawn first;
/// Z supports are drawn among weight-k sets with even overlap with every X support.
StabilizerCode random_css_instance(const RandomCssOptions &options, std::uint64_t seed);

/// Term per generator g: I - (1/ord) sum_j g^j, the projector off the +1 eigenspace of g.
CLHInstance as_projector_clh(const StabilizerCode &code);
CLHInstance as_projector_clh(QuditSystem system, const std::vector<PauliOp> &generators);

}  // namespace expandlab

#endif  // EXPANDLAB_CODE_ZOO_HPP
