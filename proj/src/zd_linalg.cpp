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

#include "expandlab/zd_linalg.hpp"

#include <stdexcept>

#include "expandlab/pauli.hpp"

namespace expandlab::zd {

int mod(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inv_mod(int a, int p) {
  a = mod(a, p);
  if (a == 0) throw std::domain_error("zero has no inverse");
  // Extended Euclid.
  long long t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    long long q = r / new_r;
    long long tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("element not invertible");
  return mod(t, p);
}

RowSpace::RowSpace(std::size_t dim, int p) : dim_(dim), p_(p) {
  if (!is_prime(p)) throw std::domain_error("Z_d linear algebra requires prime d");
}

Vec RowSpace::reduce(Vec v) const {
  if (v.size() != dim_) throw std::invalid_argument("vector length mismatch");
  for (auto &e : v) e = mod(e, p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int c = v[pivots_[i]];
    if (c == 0) continue;
    const Vec &r = rows_[i];
    for (std::size_t j = 0; j < dim_; ++j) {
      if (r[j] != 0) v[j] = mod(v[j] - static_cast<long long>(c) * r[j], p_);
    }
  }
  return v;
}

bool RowSpace::contains(const Vec &v) const {
  Vec r = reduce(v);
  for (int e : r) {
    if (e != 0) return false;
  }
  return true;
}

bool RowSpace::add(const Vec &v) {
  Vec r = reduce(v);
  std::size_t pivot = dim_;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (r[j] != 0) {
      pivot = j;
      break;
    }
  }
  if (pivot == dim_) return false;
  int inv = inv_mod(r[pivot], p_);
  for (auto &e : r) e = mod(static_cast<long long>(e) * inv, p_);
  for (auto &row : rows_) {
    int c = row[pivot];
    if (c == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (r[j] != 0) row[j] = mod(row[j] - static_cast<long long>(c) * r[j], p_);
    }
  }
  // Keep rows sorted by pivot.
  std::size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < pivot) ++pos;
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
  pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), pivot);
  return true;
}

std::size_t rank(const std::vector<Vec> &rows, std::size_t cols, int p) {
  RowSpace s(cols, p);
  for (const auto &r : rows) s.add(r);
  return s.rank();
}

std::vector<Vec> nullspace(const std::vector<Vec> &rows, std::size_t cols, int p) {
  RowSpace s(cols, p);
  for (const auto &r : rows) s.add(r);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : s.pivots()) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < s.rank(); ++i) {
      v[s.pivots()[i]] = mod(-static_cast<long long>(s.rows()[i][f]), p);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

Vec symplectic_dual(const Vec &v, int p) {
  const std::size_t n = v.size() / 2;
  Vec out(v.size());
  for (std::size_t q = 0; q < n; ++q) {
    out[q] = mod(-static_cast<long long>(v[n + q]), p);
    out[n + q] = mod(v[q], p);
  }
  return out;
}

std::vector<Vec> symplectic_complement(const std::vector<Vec> &rows, std::size_t n, int p) {
  std::vector<Vec> duals;
  duals.reserve(rows.size());
  for (const auto &r : rows) duals.push_back(symplectic_dual(r, p));
  return nullspace(duals, 2 * n, p);
}

int dot(const Vec &a, const Vec &b, int p) {
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
  return mod(s, p);
}

int symplectic(const Vec &a, const Vec &b, int p) {
  const std::size_t n = a.size() / 2;
  long long s = 0;
  for (std::size_t q = 0; q < n; ++q) {
    s += static_cast<long long>(a[q]) * b[n + q] - static_cast<long long>(a[n + q]) * b[q];
  }
  return mod(s, p);
}

}  // namespace expandlab::zd
