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

#ifndef EXPANDLAB_ALGEBRA_HPP
#define EXPANDLAB_ALGEBRA_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "expandlab/dense.hpp"

namespace expandlab {

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlgebraOptions {
  double tol = 1e-8;         // rank and commutation tolerance
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  int max_resamples = 5;
};

/// Orthonormal (Hilbert-Schmidt) basis of the unital *-algebra generated by `gens` on C^dim.
std::vector<dense::Mat> algebra_basis(const std::vector<dense::Mat> &gens, int dim, double tol);

/// Basis of the centre of the algebra spanned by `basis`.
std::vector<dense::Mat> algebra_center(const std::vector<dense::Mat> &basis, double tol);

/// One simple summand of a *-algebra: on the columns of `isometry` (ordered j-major over
/// factor_dim, then over multiplicity) the algebra acts as M_{factor_dim} (x) I_{multiplicity}.
struct SimpleBlock {
  dense::Mat isometry;
  int factor_dim = 1;
  int multiplicity = 1;
};

/// Wedderburn decomposition of the *-algebra generated by gens. Blocks are ordered by the first
/// standard basis vector they overlap.
std::vector<SimpleBlock> decompose_star_algebra(const std::vector<dense::Mat> &gens, int dim,
                                                const AlgebraOptions &options = {});

/// A summand of a qudit space carrying a tensor split: columns of `isometry` are indexed by
/// (a, b) with a < left_dim the slow index.
struct SplitBlock {
  dense::Mat isometry;
  int left_dim = 1;
  int right_dim = 1;
};

struct QuditDecomposition {
  std::size_t site = 0;
  int dim = 0;
  std::vector<SplitBlock> blocks;
  double reconstruction_error = 0.0;
};

/// Operators on position `pos` obtained as partial matrix elements of `op`, closed under adjoint,
/// returned as an orthonormal spanning set.
std::vector<dense::Mat> induced_algebra(const dense::Mat &op, const std::vector<int> &dims, std::size_t pos,
                                        double tol);

/// Splits C^dim into blocks on which the two commuting algebras act as M (x) I and I (x) M'.
QuditDecomposition structure_decomposition(const std::vector<dense::Mat> &gens_left,
                                           const std::vector<dense::Mat> &gens_right, int dim,
                                           const AlgebraOptions &options = {});

/// Largest deviation from: orthonormal blocks, completeness, invariance, and the M (x) I / I (x) M'
/// form of the left and right generators.
double decomposition_error(const QuditDecomposition &dec, const std::vector<dense::Mat> &gens_left,
                           const std::vector<dense::Mat> &gens_right);

}  // namespace expandlab

#endif  // EXPANDLAB_ALGEBRA_HPP
