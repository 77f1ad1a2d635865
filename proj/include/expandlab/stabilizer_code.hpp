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

#ifndef EXPANDLAB_STABILIZER_CODE_HPP
#define EXPANDLAB_STABILIZER_CODE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "expandlab/coset_search.hpp"
#include "expandlab/pauli.hpp"
#include "expandlab/zd_linalg.hpp"

namespace expandlab {

enum class ValidationFailure { none, non_commuting, locality, dependent, trivial_qudit, system_mismatch };

std::string to_string(ValidationFailure f);

struct ValidationReport {
  bool valid = false;
  ValidationFailure failure = ValidationFailure::none;
  std::vector<std::size_t> indices;  // generator or qudit indices involved in the failure
  std::string message;
  std::size_t k = 0;
  std::size_t max_right_degree = 0;
};

class CodeValidationError : public std::invalid_argument {
 public:
  explicit CodeValidationError(ValidationReport report);
  const ValidationReport &report() const { return report_; }

 private:
  ValidationReport report_;
};

/// A validated stabilizer code: commuting, k-local, independent generators with no trivial qudit.
class StabilizerCode {
 public:
  const QuditSystem &system() const { return system_; }
  std::size_t n() const { return system_.n; }
  int d() const { return system_.d; }
  std::size_t k() const { return k_; }
  std::size_t max_right_degree() const { return max_right_degree_; }
  std::size_t num_generators() const { return generators_.size(); }
  const std::vector<PauliOp> &generators() const { return generators_; }
  const PauliOp &generator(std::size_t i) const { return generators_[i]; }

  /// Generators acting non-trivially on qudit q, ascending.
  const std::vector<std::size_t> &generators_on(std::size_t q) const { return on_qudit_[q]; }
  /// Supports of the generators.
  const std::vector<std::vector<std::size_t>> &supports() const { return supports_; }

  const std::vector<zd::Vec> &generator_vectors() const { return vectors_; }
  /// Generator vectors followed by a completion to a basis of the centralizer.
  const std::vector<zd::Vec> &centralizer_basis() const { return centralizer_basis_; }
  const zd::RowSpace &group_space() const { return group_space_; }

  const CosetSolver &centralizer_solver() const { return centralizer_solver_; }
  const CosetSolver &stabilizer_solver() const { return stabilizer_solver_; }

 private:
  friend StabilizerCode validate(const std::vector<PauliOp> &generators, std::size_t k);
  StabilizerCode(QuditSystem system, std::vector<PauliOp> generators, std::size_t k);

  QuditSystem system_;
  std::vector<PauliOp> generators_;
  std::size_t k_;
  std::size_t max_right_degree_ = 0;
  std::vector<std::vector<std::size_t>> on_qudit_;
  std::vector<std::vector<std::size_t>> supports_;
  std::vector<zd::Vec> vectors_;
  zd::RowSpace group_space_;
  std::vector<zd::Vec> centralizer_basis_;
  CosetSolver centralizer_solver_;
  CosetSolver stabilizer_solver_;
};

/// Checks the invariants in order: commutation, locality, independence, trivial qudit.
/// k = 0 means "use the largest generator weight".
ValidationReport check_generators(const std::vector<PauliOp> &generators, std::size_t k);

/// Returns the validated code or throws CodeValidationError carrying the first failed invariant.
StabilizerCode validate(const std::vector<PauliOp> &generators, std::size_t k = 0);

struct Syndrome {
  std::vector<std::size_t> violated;
  std::size_t size() const { return violated.size(); }
  bool empty() const { return violated.empty(); }
  bool operator==(const Syndrome &) const = default;
};

Syndrome syndrome(const StabilizerCode &code, const PauliOp &e);
std::size_t penalty(const StabilizerCode &code, const PauliOp &e);
bool in_group(const StabilizerCode &code, const PauliOp &e);
bool in_centralizer(const StabilizerCode &code, const PauliOp &e);

enum class CosetMode { stabilizer, centralizer };

struct CosetWeight {
  std::size_t weight;
  PauliOp representative;
};

/// Minimum weight over E times the stabilizer group (mode stabilizer) or the centralizer (mode
/// centralizer). nullopt means the minimum exceeds cap.
std::optional<CosetWeight> coset_min_weight_detailed(const StabilizerCode &code, const PauliOp &e, CosetMode mode,
                                                     std::size_t cap = 8,
                                                     std::uint64_t node_budget = kDefaultSearchBudget);
std::optional<std::size_t> coset_min_weight(const StabilizerCode &code, const PauliOp &e, CosetMode mode,
                                            std::size_t cap = 8, std::uint64_t node_budget = kDefaultSearchBudget);

/// Reference implementation by enumeration of weight classes. Slow; used as a test oracle.
std::optional<std::size_t> coset_min_weight_brute(const StabilizerCode &code, const PauliOp &e, CosetMode mode,
                                                  std::size_t cap);

struct DistanceResult {
  std::optional<std::size_t> distance;  // nullopt: exceeds cap
  std::optional<PauliOp> witness;
};

/// Smallest weight of a word in Z(A) - A, by iterative deepening over weight classes.
DistanceResult distance(const StabilizerCode &code, std::size_t cap = 8);

/// Same quantity by enumerating every element of Z(A) from a nullspace basis. Requires
/// d^(dim Z(A)) within `max_elements`.
std::optional<std::size_t> distance_by_centralizer_enumeration(const StabilizerCode &code,
                                                               std::uint64_t max_elements = 1ULL << 22);

struct NocommuteReport {
  bool holds = true;
  std::optional<std::size_t> offending_qudit;
  /// Per qudit, a pair of generators whose restrictions to the qudit do not commute.
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> pairs;
};

NocommuteReport check_nocommute_per_qudit(const StabilizerCode &code);

/// Minimum weight of a non-identity element of the stabilizer group, if below `cap + 1`.
std::optional<std::size_t> min_group_weight(const StabilizerCode &code, std::size_t cap);

/// Every non-identity group element has weight >= threshold.
bool has_group_weight_at_least(const StabilizerCode &code, std::size_t threshold);

}  // namespace expandlab

#endif  // EXPANDLAB_STABILIZER_CODE_HPP
