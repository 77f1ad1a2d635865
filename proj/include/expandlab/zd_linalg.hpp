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

#ifndef EXPANDLAB_ZD_LINALG_HPP
#define EXPANDLAB_ZD_LINALG_HPP

#include <cstddef>
#include <vector>

namespace expandlab::zd {

using Vec = std::vector<int>;

int mod(long long a, int p);
int inv_mod(int a, int p);

/// Row space over Z_p (p prime), kept in reduced row echelon form.
class RowSpace {
 public:
  RowSpace(std::size_t dim, int p);

  /// Adds v; returns false (and leaves the space unchanged) if v is already in the span.
  bool add(const Vec &v);
  bool contains(const Vec &v) const;
  Vec reduce(Vec v) const;

  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  int modulus() const { return p_; }
  const std::vector<Vec> &rows() const { return rows_; }
  const std::vector<std::size_t> &pivots() const { return pivots_; }

 private:
  std::size_t dim_;
  int p_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

std::size_t rank(const std::vector<Vec> &rows, std::size_t cols, int p);

/// Basis of { v : <r, v> = 0 for all rows r }.
std::vector<Vec> nullspace(const std::vector<Vec> &rows, std::size_t cols, int p);

/// For a symplectic vector (x|z) returns (-z|x), so that dot(dual(a), b) is the symplectic product.
Vec symplectic_dual(const Vec &v, int p);

/// Basis of the symplectic complement of span(rows) in Z_p^{2n}.
std::vector<Vec> symplectic_complement(const std::vector<Vec> &rows, std::size_t n, int p);

int dot(const Vec &a, const Vec &b, int p);
int symplectic(const Vec &a, const Vec &b, int p);

}  // namespace expandlab::zd

#endif  // EXPANDLAB_ZD_LINALG_HPP
