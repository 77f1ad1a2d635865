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

#include "expandlab/dense.hpp"

#include <stdexcept>

namespace expandlab::dense {

namespace {

std::vector<std::size_t> strides_of(const std::vector<int> &dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * static_cast<std::size_t>(dims[i]);
  return s;
}

// Splits every full index into (index over `positions`, index over the remaining factors).
struct Split {
  std::vector<std::size_t> inner;  // full index -> index over positions
  std::vector<std::size_t> outer;  // full index -> index over the rest
  std::vector<std::vector<std::size_t>> full;  // [outer][inner] -> full index
  std::size_t inner_dim = 1;
  std::size_t outer_dim = 1;
};

Split split_indices(const std::vector<int> &dims, const std::vector<std::size_t> &positions) {
  const std::size_t total = product(dims);
  std::vector<char> is_inner(dims.size(), 0);
  for (auto p : positions) {
    if (p >= dims.size() || is_inner[p]) throw std::invalid_argument("bad tensor position list");
    is_inner[p] = 1;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!is_inner[i]) rest.push_back(i);
  }
  Split s;
  for (auto p : positions) s.inner_dim *= static_cast<std::size_t>(dims[p]);
  for (auto p : rest) s.outer_dim *= static_cast<std::size_t>(dims[p]);
  s.inner.resize(total);
  s.outer.resize(total);
  s.full.assign(s.outer_dim, std::vector<std::size_t>(s.inner_dim));
  const auto st = strides_of(dims);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t a = 0, b = 0;
    for (auto p : positions) a = a * static_cast<std::size_t>(dims[p]) + (idx / st[p]) % static_cast<std::size_t>(dims[p]);
    for (auto p : rest) b = b * static_cast<std::size_t>(dims[p]) + (idx / st[p]) % static_cast<std::size_t>(dims[p]);
    s.inner[idx] = a;
    s.outer[idx] = b;
    s.full[b][a] = idx;
  }
  return s;
}

std::vector<std::size_t> permutation_map(const std::vector<int> &dims, const std::vector<std::size_t> &perm,
                                         std::vector<int> &new_dims) {
  if (perm.size() != dims.size()) throw std::invalid_argument("permutation size mismatch");
  new_dims.resize(dims.size());
  for (std::size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims[perm[i]];
  const auto old_st = strides_of(dims);
  const auto new_st = strides_of(new_dims);
  const std::size_t total = product(dims);
  std::vector<std::size_t> map(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      std::size_t digit = (idx / old_st[perm[i]]) % static_cast<std::size_t>(dims[perm[i]]);
      out += digit * new_st[i];
    }
    map[idx] = out;
  }
  return map;
}

}  // namespace

std::size_t product(const std::vector<int> &dims) {
  std::size_t p = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("tensor factor dimension must be positive");
    p *= static_cast<std::size_t>(d);
  }
  return p;
}

Mat embed(const Mat &op, const std::vector<std::size_t> &positions, const std::vector<int> &dims) {
  Split s = split_indices(dims, positions);
  if (static_cast<std::size_t>(op.rows()) != s.inner_dim || static_cast<std::size_t>(op.cols()) != s.inner_dim) {
    throw std::invalid_argument("embed: operator size does not match its factors");
  }
  const std::size_t total = product(dims);
  Mat out = Mat::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  for (std::size_t b = 0; b < s.outer_dim; ++b) {
    const auto &row = s.full[b];
    for (std::size_t i = 0; i < s.inner_dim; ++i) {
      for (std::size_t j = 0; j < s.inner_dim; ++j) {
        out(static_cast<Eigen::Index>(row[i]), static_cast<Eigen::Index>(row[j])) =
            op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return out;
}

Mat permute(const Mat &op, const std::vector<int> &dims, const std::vector<std::size_t> &perm) {
  std::vector<int> nd;
  auto map = permutation_map(dims, perm, nd);
  Mat out(op.rows(), op.cols());
  for (std::size_t r = 0; r < map.size(); ++r) {
    for (std::size_t c = 0; c < map.size(); ++c) {
      out(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) =
          op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

Vec permute(const Vec &state, const std::vector<int> &dims, const std::vector<std::size_t> &perm) {
  std::vector<int> nd;
  auto map = permutation_map(dims, perm, nd);
  Vec out(state.size());
  for (std::size_t r = 0; r < map.size(); ++r) {
    out(static_cast<Eigen::Index>(map[r])) = state(static_cast<Eigen::Index>(r));
  }
  return out;
}

Mat partial_trace(const Mat &op, const std::vector<int> &dims, std::size_t pos) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i != pos) rest.push_back(i);
  }
  Split s = split_indices(dims, rest);
  Mat out = Mat::Zero(static_cast<Eigen::Index>(s.inner_dim), static_cast<Eigen::Index>(s.inner_dim));
  for (std::size_t e = 0; e < s.outer_dim; ++e) {
    const auto &row = s.full[e];
    for (std::size_t i = 0; i < s.inner_dim; ++i) {
      for (std::size_t j = 0; j < s.inner_dim; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            op(static_cast<Eigen::Index>(row[i]), static_cast<Eigen::Index>(row[j]));
      }
    }
  }
  return out;
}

std::optional<Mat> factor_identity(const Mat &op, const std::vector<int> &dims, std::size_t pos, double tol) {
  Mat m = partial_trace(op, dims, pos) / static_cast<double>(dims[pos]);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i != pos) rest.push_back(i);
  }
  Mat back = embed(m, rest, dims);
  if (max_abs(back - op) > tol) return std::nullopt;
  return m;
}

Mat conjugate_site(const Mat &op, const std::vector<int> &dims, std::size_t pos, const Mat &v) {
  if (v.rows() != dims[pos]) throw std::invalid_argument("conjugate_site: isometry row count mismatch");
  std::vector<int> new_dims = dims;
  new_dims[pos] = static_cast<int>(v.cols());
  const std::size_t old_total = product(dims);
  const std::size_t new_total = product(new_dims);
  // W maps the new space into the old one.
  Split so = split_indices(dims, {pos});
  Split sn = split_indices(new_dims, {pos});
  Mat w = Mat::Zero(static_cast<Eigen::Index>(old_total), static_cast<Eigen::Index>(new_total));
  for (std::size_t b = 0; b < so.outer_dim; ++b) {
    for (Eigen::Index a = 0; a < v.rows(); ++a) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        w(static_cast<Eigen::Index>(so.full[b][static_cast<std::size_t>(a)]),
          static_cast<Eigen::Index>(sn.full[b][static_cast<std::size_t>(c)])) = v(a, c);
      }
    }
  }
  return w.adjoint() * op * w;
}

std::vector<Mat> partial_matrix_elements(const Mat &op, const std::vector<int> &dims, std::size_t pos) {
  Split s = split_indices(dims, {pos});
  const auto dq = static_cast<Eigen::Index>(dims[pos]);
  std::vector<Mat> out;
  out.reserve(s.outer_dim * s.outer_dim);
  for (std::size_t e = 0; e < s.outer_dim; ++e) {
    for (std::size_t f = 0; f < s.outer_dim; ++f) {
      Mat m(dq, dq);
      for (Eigen::Index a = 0; a < dq; ++a) {
        for (Eigen::Index b = 0; b < dq; ++b) {
          m(a, b) = op(static_cast<Eigen::Index>(s.full[e][static_cast<std::size_t>(a)]),
                       static_cast<Eigen::Index>(s.full[f][static_cast<std::size_t>(b)]));
        }
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

Vec apply_local(const Mat &local, const std::vector<std::size_t> &positions, const Vec &state,
                const std::vector<int> &dims) {
  Split s = split_indices(dims, positions);
  if (static_cast<std::size_t>(local.rows()) != s.inner_dim) throw std::invalid_argument("apply_local: size mismatch");
  Vec out = Vec::Zero(state.size());
  Vec buf(static_cast<Eigen::Index>(s.inner_dim));
  for (std::size_t b = 0; b < s.outer_dim; ++b) {
    const auto &row = s.full[b];
    for (std::size_t i = 0; i < s.inner_dim; ++i) buf(static_cast<Eigen::Index>(i)) = state(static_cast<Eigen::Index>(row[i]));
    Vec r = local * buf;
    for (std::size_t i = 0; i < s.inner_dim; ++i) out(static_cast<Eigen::Index>(row[i])) = r(static_cast<Eigen::Index>(i));
  }
  return out;
}

double max_abs(const Mat &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Mat kron(const Mat &a, const Mat &b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vec kron(const Vec &a, const Vec &b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace expandlab::dense
