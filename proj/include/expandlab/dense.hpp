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

#ifndef EXPANDLAB_DENSE_HPP
#define EXPANDLAB_DENSE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace expandlab::dense {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Tensor-product layouts are lexicographic: position 0 is the most significant factor.
std::size_t product(const std::vector<int> &dims);

/// Places `op` (acting on the listed positions, in that order) into the full space `dims`.
Mat embed(const Mat &op, const std::vector<std::size_t> &positions, const std::vector<int> &dims);

/// Reorders tensor factors: new position i carries old position perm[i].
Mat permute(const Mat &op, const std::vector<int> &dims, const std::vector<std::size_t> &perm);
Vec permute(const Vec &state, const std::vector<int> &dims, const std::vector<std::size_t> &perm);

/// Tr_{pos}(op).
Mat partial_trace(const Mat &op, const std::vector<int> &dims, std::size_t pos);

/// If op = M (x) I at position pos (within tol, max-abs norm), returns M on the remaining factors.
std::optional<Mat> factor_identity(const Mat &op, const std::vector<int> &dims, std::size_t pos, double tol);

/// (I (x) V^dag (x) I) op (I (x) V (x) I) with V acting at pos; V is dims[pos] x c.
Mat conjugate_site(const Mat &op, const std::vector<int> &dims, std::size_t pos, const Mat &v);

/// Operator-valued matrix elements <e| op |f> over the factors other than pos, as dims[pos]-square blocks.
std::vector<Mat> partial_matrix_elements(const Mat &op, const std::vector<int> &dims, std::size_t pos);

/// Applies `local` acting on `positions` to a state on `dims`.
Vec apply_local(const Mat &local, const std::vector<std::size_t> &positions, const Vec &state,
                const std::vector<int> &dims);

double max_abs(const Mat &m);
Mat kron(const Mat &a, const Mat &b);
Vec kron(const Vec &a, const Vec &b);

}  // namespace expandlab::dense

#endif  // EXPANDLAB_DENSE_HPP
