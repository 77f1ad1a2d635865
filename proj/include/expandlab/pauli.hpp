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

#ifndef EXPANDLAB_PAULI_HPP
#define EXPANDLAB_PAULI_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace expandlab {

/// n qudits of local dimension d.
struct QuditSystem {
  std::size_t n = 1;
  int d = 2;

  QuditSystem() = default;
  QuditSystem(std::size_t n_, int d_);

  bool operator==(const QuditSystem &) const = default;
};

bool is_prime(int d);

/// Generalized Pauli word w^phase * prod_q X^{x_q} P^{z_q}, with w a primitive
/// 2d-th root of unity. X|i> = |i+1 mod d>, P|j> = w_d^j |j>.
class PauliOp {
 public:
  explicit PauliOp(QuditSystem system);
  PauliOp(QuditSystem system, std::vector<int> x_exps, std::vector<int> z_exps, int phase_exp = 0);

  static PauliOp identity(QuditSystem system) { return PauliOp(system); }
  static PauliOp single(QuditSystem system, std::size_t q, int x, int z);

  const QuditSystem &system() const { return system_; }
  std::size_t num_qudits() const { return system_.n; }
  int dim() const { return system_.d; }

  const std::vector<int> &x_exps() const { return x_; }
  const std::vector<int> &z_exps() const { return z_; }
  int x(std::size_t q) const { return x_[q]; }
  int z(std::size_t q) const { return z_[q]; }
  int phase_exp() const { return phase_; }

  bool acts_on(std::size_t q) const { return x_[q] != 0 || z_[q] != 0; }
  std::vector<std::size_t> support() const;
  bool is_identity_up_to_phase() const;

  /// Sets the exponents on qudit q (reduced mod d).
  void set(std::size_t q, int x, int z);
  void set_phase(int phase_exp);

  /// Symplectic vector (x_0..x_{n-1}, z_0..z_{n-1}).
  std::vector<int> symplectic_vector() const;

  bool operator==(const PauliOp &other) const = default;
  bool equal_up_to_phase(const PauliOp &other) const;

 private:
  QuditSystem system_;
  std::vector<int> x_;
  std::vector<int> z_;
  int phase_ = 0;
};

PauliOp from_symplectic(QuditSystem system, const std::vector<int> &vec);

PauliOp multiply(const PauliOp &a, const PauliOp &b);
PauliOp inverse(const PauliOp &a);
PauliOp power(const PauliOp &a, int exponent);

/// Sum_q x_a z_b - z_a x_b, reduced mod d.
int symplectic_product(const PauliOp &a, const PauliOp &b);
bool commutes(const PauliOp &a, const PauliOp &b);

std::size_t weight(const PauliOp &a);

/// Component on qudit q as a one-qudit operator with phase 0.
PauliOp restrict(const PauliOp &a, std::size_t q);
/// Drops qudit q; keeps the phase.
PauliOp restrict_complement(const PauliOp &a, std::size_t q);

inline constexpr std::size_t kDefaultMatrixRowCap = std::size_t{1} << 14;

Eigen::MatrixXcd single_qudit_matrix(int d, int x, int z);
Eigen::MatrixXcd to_matrix(const PauliOp &a, std::size_t max_rows = kDefaultMatrixRowCap);

/// Text form: "q:0,x:1,z:0 q:3,x:0,z:1 phase:2". Identity is the empty string.
std::string to_text(const PauliOp &a);
PauliOp parse_pauli(std::string_view text, QuditSystem system);

}  // namespace expandlab

#endif  // EXPANDLAB_PAULI_HPP
