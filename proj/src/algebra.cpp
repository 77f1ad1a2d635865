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

#include "expandlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "expandlab/seeds.hpp"

namespace expandlab {

using dense::Mat;

namespace {

std::complex<double> hs_inner(const Mat &a, const Mat &b) { return (a.conjugate().cwiseProduct(b)).sum(); }

// Gram-Schmidt step. Returns true if m was independent of the basis and got appended.
bool try_add(std::vector<Mat> &basis, const Mat &m, double tol) {
  const double scale = std::max(1.0, m.norm());
  Mat r = m;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto &b : basis) r -= hs_inner(b, r) * b;
  }
  const double rel = r.norm() / scale;
  if (rel <= tol) return false;
  if (rel <= 100.0 * tol) {
    throw DecompositionError("numerical rank ambiguity: relative residual " + std::to_string(rel) +
                             " sits between the rank tolerance and 100x it");
  }
  basis.push_back(r / r.norm());
  return true;
}

// Groups sorted eigenvalues by gaps. Returns cluster sizes, or empty if some gap is ambiguous.
std::vector<int> cluster_sizes(const Eigen::VectorXd &vals, double tol) {
  const double split = std::sqrt(tol);
  std::vector<int> sizes;
  int current = 1;
  for (Eigen::Index i = 1; i < vals.size(); ++i) {
    const double gap = vals(i) - vals(i - 1);
    if (gap > split) {
      sizes.push_back(current);
      current = 1;
    } else if (gap > 100.0 * tol) {
      return {};
    } else {
      ++current;
    }
  }
  sizes.push_back(current);
  return sizes;
}

Mat random_hermitian_combination(const std::vector<Mat> &elems, Rng &rng) {
  Mat h = Mat::Zero(elems.front().rows(), elems.front().cols());
  for (const auto &z : elems) {
    std::complex<double> a(2.0 * uniform_unit(rng) - 1.0, 2.0 * uniform_unit(rng) - 1.0);
    h += a * z;
  }
  return (h + h.adjoint()) / 2.0;
}

double identity_factor_error(const Mat &c, const std::vector<int> &dims, std::size_t pos) {
  Mat m = dense::partial_trace(c, dims, pos) / static_cast<double>(dims[pos]);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i != pos) rest.push_back(i);
  }
  return dense::max_abs(dense::embed(m, rest, dims) - c);
}

// Factor a simple block: `w` spans the block, `compressed` spans the compressed algebra.
SimpleBlock factor_simple_block(const Mat &w, const std::vector<Mat> &compressed, double tol, Rng &rng,
                                int max_resamples) {
  const auto bdim = static_cast<int>(w.cols());
  std::vector<Mat> cbasis;
  for (const auto &c : compressed) try_add(cbasis, c, tol);
  const int r = static_cast<int>(cbasis.size());
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(r))));
  if (n * n != r || bdim % n != 0) {
    throw DecompositionError("block algebra of dimension " + std::to_string(r) + " on a " + std::to_string(bdim) +
                             "-dimensional block is not a full matrix algebra");
  }
  const int m = bdim / n;
  SimpleBlock out;
  out.factor_dim = n;
  out.multiplicity = m;
  if (n == 1) {
    out.isometry = w;
    return out;
  }
  for (int attempt = 0; attempt <= max_resamples; ++attempt) {
    Mat h = random_hermitian_combination(cbasis, rng);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    auto sizes = cluster_sizes(es.eigenvalues(), tol);
    if (static_cast<int>(sizes.size()) != n ||
        std::any_of(sizes.begin(), sizes.end(), [&](int s) { return s != m; })) {
      continue;
    }
    const Mat &vecs = es.eigenvectors();
    Mat f1 = vecs.leftCols(m);
    Mat g(bdim, bdim);
    g.leftCols(m) = f1;
    bool ok = true;
    for (int j = 1; j < n && ok; ++j) {
      Mat fj = vecs.middleCols(j * m, m);
      // Intertwiner P_jj X P_11 for the basis element giving the largest overlap.
      Mat best_t;
      double best_norm = -1.0;
      for (const auto &x : cbasis) {
        Mat t = fj.adjoint() * x * f1;
        double nrm = t.norm();
        if (nrm > best_norm) {
          best_norm = nrm;
          best_t = t;
        }
      }
      const double c = std::sqrt(best_t.squaredNorm() / m);
      if (c <= std::sqrt(tol)) {
        ok = false;
        break;
      }
      Mat u = best_t / c;
      if (dense::max_abs(u.adjoint() * u - Mat::Identity(m, m)) > 1e-6) {
        ok = false;
        break;
      }
      g.middleCols(j * m, m) = fj * u;
    }
    if (!ok) continue;
    out.isometry = w * g;
    return out;
  }
  throw DecompositionError("could not resolve the matrix units of a simple block (eigenvalue gaps ambiguous)");
}

}  // namespace

std::vector<Mat> algebra_basis(const std::vector<Mat> &gens, int dim, double tol) {
  std::vector<Mat> basis;
  try_add(basis, Mat::Identity(dim, dim), tol);
  for (const auto &g : gens) {
    if (g.rows() != dim || g.cols() != dim) throw std::invalid_argument("generator has wrong dimension");
    try_add(basis, g, tol);
    try_add(basis, g.adjoint(), tol);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t count = basis.size();
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        if (try_add(basis, basis[i] * basis[j], tol)) changed = true;
      }
    }
  }
  return basis;
}

std::vector<Mat> algebra_center(const std::vector<Mat> &basis, double tol) {
  const std::size_t n = basis.size();
  if (n == 0) return {};
  const Eigen::Index dim = basis.front().rows();
  const Eigen::Index block = dim * dim;
  Mat sys(static_cast<Eigen::Index>(n) * block, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Mat c = basis[i] * basis[j] - basis[j] * basis[i];
      sys.block(static_cast<Eigen::Index>(j) * block, static_cast<Eigen::Index>(i), block, 1) =
          Eigen::Map<const Eigen::VectorXcd>(c.data(), block);
    }
  }
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  const double smax = sv.size() > 0 ? std::max(1.0, sv(0)) : 1.0;
  std::vector<Mat> center;
  const Mat &v = svd.matrixV();
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(n); ++c) {
    const double s = c < sv.size() ? sv(c) : 0.0;
    if (s > tol * smax) continue;
    Mat z = Mat::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) z += v(static_cast<Eigen::Index>(i), c) * basis[i];
    center.push_back(z);
  }
  return center;
}

std::vector<SimpleBlock> decompose_star_algebra(const std::vector<Mat> &gens, int dim, const AlgebraOptions &options) {
  Rng rng(options.seed);
  auto basis = algebra_basis(gens, dim, options.tol);
  auto center = algebra_center(basis, options.tol);
  const int r = static_cast<int>(center.size());
  if (r == 0) throw DecompositionError("algebra centre came out empty");

  std::vector<Mat> block_spaces;
  bool resolved = false;
  for (int attempt = 0; attempt <= options.max_resamples && !resolved; ++attempt) {
    Mat h = random_hermitian_combination(center, rng);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    auto sizes = cluster_sizes(es.eigenvalues(), options.tol);
    if (static_cast<int>(sizes.size()) != r) continue;
    block_spaces.clear();
    Eigen::Index start = 0;
    for (int s : sizes) {
      block_spaces.push_back(es.eigenvectors().middleCols(start, s));
      start += s;
    }
    resolved = true;
  }
  if (!resolved) {
    throw DecompositionError("could not separate the minimal central projections after " +
                             std::to_string(options.max_resamples + 1) + " random central elements");
  }

  // Canonical order: by the first standard basis vector each block covers.
  std::vector<std::pair<Eigen::Index, std::size_t>> keys;
  for (std::size_t b = 0; b < block_spaces.size(); ++b) {
    Eigen::VectorXd diag = block_spaces[b].rowwise().squaredNorm();
    Eigen::Index first = 0;
    while (first < diag.size() && diag(first) <= 1e-6) ++first;
    keys.emplace_back(first, b);
  }
  std::stable_sort(keys.begin(), keys.end(), [](const auto &a, const auto &b) { return a.first < b.first; });

  std::vector<SimpleBlock> blocks;
  for (const auto &[key, b] : keys) {
    (void)key;
    const Mat &w = block_spaces[b];
    std::vector<Mat> compressed;
    compressed.reserve(basis.size());
    for (const auto &x : basis) compressed.push_back(w.adjoint() * x * w);
    blocks.push_back(factor_simple_block(w, compressed, options.tol, rng, options.max_resamples));
  }
  return blocks;
}

std::vector<Mat> induced_algebra(const Mat &op, const std::vector<int> &dims, std::size_t pos, double tol) {
  if (pos >= dims.size()) throw std::out_of_range("qudit is not in the term's support");
  std::vector<Mat> basis;
  for (const auto &m : dense::partial_matrix_elements(op, dims, pos)) {
    if (dense::max_abs(m) <= tol) continue;
    try_add(basis, m, tol);
    try_add(basis, m.adjoint(), tol);
  }
  return basis;
}

QuditDecomposition structure_decomposition(const std::vector<Mat> &gens_left, const std::vector<Mat> &gens_right,
                                           int dim, const AlgebraOptions &options) {
  for (std::size_t i = 0; i < gens_left.size(); ++i) {
    for (std::size_t j = 0; j < gens_right.size(); ++j) {
      const double c = dense::max_abs(gens_left[i] * gens_right[j] - gens_right[j] * gens_left[i]);
      if (c > options.tol) {
        throw DecompositionError("commuting-algebras hypothesis fails: left generator " + std::to_string(i) +
                                 " and right generator " + std::to_string(j) + " have commutator norm " +
                                 std::to_string(c));
      }
    }
  }
  AlgebraOptions right_opts = options;
  right_opts.seed = derive_seed(options.seed, "right");
  AlgebraOptions left_opts = options;
  left_opts.seed = derive_seed(options.seed, "left");
  auto right_blocks = decompose_star_algebra(gens_right, dim, right_opts);
  auto left_blocks = decompose_star_algebra(gens_left, dim, left_opts);

  QuditDecomposition dec;
  dec.dim = dim;
  if (right_blocks.size() <= left_blocks.size()) {
    // Right algebra acts as M_n (x) I_m; the left one lives on the multiplicity factor.
    for (const auto &b : right_blocks) {
      const int n = b.factor_dim, m = b.multiplicity;
      Mat iso(dim, n * m);
      for (int s = 0; s < m; ++s) {
        for (int j = 0; j < n; ++j) iso.col(s * n + j) = b.isometry.col(j * m + s);
      }
      dec.blocks.push_back({iso, m, n});
    }
  } else {
    for (const auto &b : left_blocks) dec.blocks.push_back({b.isometry, b.factor_dim, b.multiplicity});
  }
  dec.reconstruction_error = decomposition_error(dec, gens_left, gens_right);
  if (dec.reconstruction_error > 1e-6) {
    throw DecompositionError("block reconstruction check failed with error " +
                             std::to_string(dec.reconstruction_error));
  }
  return dec;
}

double decomposition_error(const QuditDecomposition &dec, const std::vector<Mat> &gens_left,
                           const std::vector<Mat> &gens_right) {
  double err = 0.0;
  const int dim = dec.dim;
  Mat total = Mat::Zero(dim, dim);
  for (const auto &b : dec.blocks) {
    const Mat &u = b.isometry;
    if (u.rows() != dim || u.cols() != b.left_dim * b.right_dim) return 1e300;
    err = std::max(err, dense::max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols())));
    Mat p = u * u.adjoint();
    total += p;
    Mat comp = Mat::Identity(dim, dim) - p;
    const std::vector<int> dims{b.left_dim, b.right_dim};
    for (const auto &g : gens_left) {
      err = std::max(err, dense::max_abs(comp * g * p));
      err = std::max(err, identity_factor_error(u.adjoint() * g * u, dims, 1));
    }
    for (const auto &g : gens_right) {
      err = std::max(err, dense::max_abs(comp * g * p));
      err = std::max(err, identity_factor_error(u.adjoint() * g * u, dims, 0));
    }
  }
  err = std::max(err, dense::max_abs(total - Mat::Identity(dim, dim)));
  return err;
}

}  // namespace expandlab
