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

#include "expandlab/clh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "expandlab/coset_search.hpp"
#include "expandlab/seeds.hpp"

namespace expandlab {

using dense::Mat;

namespace {

std::vector<int> dims_of(const std::vector<int> &site_dims, const std::vector<std::size_t> &support) {
  std::vector<int> d;
  d.reserve(support.size());
  for (auto s : support) d.push_back(site_dims[s]);
  return d;
}

std::size_t position_of(const std::vector<std::size_t> &support, std::size_t site) {
  auto it = std::find(support.begin(), support.end(), site);
  return it == support.end() ? support.size() : static_cast<std::size_t>(it - support.begin());
}

bool shares_site(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

std::size_t shared_count(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++c;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return c;
}

void canonicalize(LiveTerm &t, const std::vector<int> &site_dims) {
  std::vector<std::size_t> perm(t.support.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return t.support[a] < t.support[b]; });
  bool identity = true;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] != i) identity = false;
  }
  if (identity) return;
  t.matrix = dense::permute(t.matrix, dims_of(site_dims, t.support), perm);
  std::vector<std::size_t> sorted(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) sorted[i] = t.support[perm[i]];
  t.support = std::move(sorted);
}

// Drops every factor on which the term acts as the identity.
void prune_term(LiveTerm &t, const std::vector<int> &site_dims, double tol) {
  bool changed = true;
  while (changed && !t.support.empty()) {
    changed = false;
    for (std::size_t pos = t.support.size(); pos-- > 0;) {
      auto dims = dims_of(site_dims, t.support);
      if (auto m = dense::factor_identity(t.matrix, dims, pos, tol)) {
        t.matrix = std::move(*m);
        t.support.erase(t.support.begin() + static_cast<std::ptrdiff_t>(pos));
        changed = true;
      }
    }
  }
}

double commutator_norm(const LiveTerm &a, const LiveTerm &b, const std::vector<int> &site_dims) {
  std::vector<std::size_t> uni;
  std::set_union(a.support.begin(), a.support.end(), b.support.begin(), b.support.end(), std::back_inserter(uni));
  auto dims = dims_of(site_dims, uni);
  std::vector<std::size_t> pa, pb;
  for (auto s : a.support) pa.push_back(position_of(uni, s));
  for (auto s : b.support) pb.push_back(position_of(uni, s));
  Mat ea = dense::embed(a.matrix, pa, dims);
  Mat eb = dense::embed(b.matrix, pb, dims);
  return dense::max_abs(ea * eb - eb * ea);
}

double min_eigenvalue(const Mat &m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lower_bound_energy(const LoopState &s) {
  double e = s.constant_energy();
  for (const auto &g : s.good) e += min_eigenvalue(g.matrix);
  return e;
}

}  // namespace

ClhValidation validate_clh(const CLHInstance &instance, const ClhTolerances &tol) {
  ClhValidation v;
  std::vector<int> site_dims(instance.n, instance.d);
  std::vector<LiveTerm> terms;
  for (std::size_t i = 0; i < instance.terms.size(); ++i) {
    const auto &t = instance.terms[i];
    bool shape_ok = std::is_sorted(t.support.begin(), t.support.end()) &&
                    std::adjacent_find(t.support.begin(), t.support.end()) == t.support.end() &&
                    std::all_of(t.support.begin(), t.support.end(), [&](std::size_t q) { return q < instance.n; });
    std::size_t expect = 1;
    for (std::size_t j = 0; j < t.support.size(); ++j) expect *= static_cast<std::size_t>(instance.d);
    if (!shape_ok || static_cast<std::size_t>(t.matrix.rows()) != expect ||
        static_cast<std::size_t>(t.matrix.cols()) != expect) {
      v.valid = false;
      v.issues.push_back("term " + std::to_string(i) + " has a malformed support or matrix size");
      continue;
    }
    const double herm = dense::max_abs(t.matrix - t.matrix.adjoint());
    const double proj = dense::max_abs(t.matrix * t.matrix - t.matrix);
    v.max_hermiticity_error = std::max(v.max_hermiticity_error, herm);
    v.max_projector_error = std::max(v.max_projector_error, proj);
    if (herm > tol.proj) {
      v.valid = false;
      v.issues.push_back("term " + std::to_string(i) + " is not Hermitian (error " + std::to_string(herm) + ")");
    }
    if (proj > tol.proj) {
      v.valid = false;
      v.issues.push_back("term " + std::to_string(i) + " is not a projector (error " + std::to_string(proj) + ")");
    }
    terms.push_back({i, t.support, t.matrix});
  }
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      if (!shares_site(terms[a].support, terms[b].support)) continue;
      const double c = commutator_norm(terms[a], terms[b], site_dims);
      if (c > v.max_commutator) {
        v.max_commutator = c;
        v.worst_pair = std::make_pair(terms[a].origin, terms[b].origin);
      }
      if (c > tol.comm) {
        v.valid = false;
        std::ostringstream msg;
        msg << "terms " << terms[a].origin << " and " << terms[b].origin << " do not commute (norm " << c << ")";
        v.issues.push_back(msg.str());
      }
    }
  }
  return v;
}

BipartiteGraph from_clh(const CLHInstance &instance, double tol) {
  std::vector<std::vector<std::size_t>> adj(instance.terms.size());
  for (std::size_t i = 0; i < instance.terms.size(); ++i) {
    const auto &t = instance.terms[i];
    std::vector<int> dims(t.support.size(), instance.d);
    for (std::size_t p = 0; p < t.support.size(); ++p) {
      if (!dense::factor_identity(t.matrix, dims, p, tol)) adj[i].push_back(t.support[p]);
    }
  }
  return BipartiteGraph(instance.terms.size(), instance.n, std::move(adj));
}

std::vector<Mat> induced_algebra(const CLHInstance &instance, std::size_t term, std::size_t qudit, double tol) {
  if (term >= instance.terms.size()) throw std::out_of_range("term index out of range");
  const auto &t = instance.terms[term];
  const std::size_t pos = position_of(t.support, qudit);
  if (pos == t.support.size()) throw std::out_of_range("qudit is not in the term's support");
  return induced_algebra(t.matrix, std::vector<int>(t.support.size(), instance.d), pos, tol);
}

Mat dense_hamiltonian(const CLHInstance &instance, std::size_t max_rows) {
  std::vector<int> dims(instance.n, instance.d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < instance.n; ++i) {
    total *= static_cast<std::size_t>(instance.d);
    if (total > max_rows) throw std::length_error("dense Hamiltonian exceeds the row cap");
  }
  Mat h = Mat::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  for (const auto &t : instance.terms) h += dense::embed(t.matrix, t.support, dims);
  return h;
}

double exact_ground_energy(const CLHInstance &instance, std::size_t max_rows) {
  return min_eigenvalue(dense_hamiltonian(instance, max_rows));
}

double energy_of(const CLHInstance &instance, const dense::Vec &state) {
  std::vector<int> dims(instance.n, instance.d);
  double e = 0.0;
  for (const auto &t : instance.terms) {
    dense::Vec hv = dense::apply_local(t.matrix, t.support, state, dims);
    e += state.dot(hv).real();
  }
  return e;
}

double LoopState::constant_energy() const {
  double e = 0.0;
  for (const auto &c : constants) e += c.second;
  return e;
}

std::size_t LoopState::remaining_dimension() const {
  std::set<std::size_t> sites;
  for (const auto &t : remaining) sites.insert(t.support.begin(), t.support.end());
  std::size_t total = 0;
  for (auto s : sites) total += static_cast<std::size_t>(site_dims[s]);
  return total;
}

LoopState initial_state(const CLHInstance &instance, const ClhTolerances &tol) {
  LoopState s;
  s.site_dims.assign(instance.n, instance.d);
  for (std::size_t i = 0; i < instance.terms.size(); ++i) {
    const auto &t = instance.terms[i];
    std::size_t expect = 1;
    for (auto q : t.support) {
      if (q >= instance.n) throw std::invalid_argument("term " + std::to_string(i) + " acts outside the system");
      expect *= static_cast<std::size_t>(instance.d);
    }
    if (!std::is_sorted(t.support.begin(), t.support.end()) ||
        std::adjacent_find(t.support.begin(), t.support.end()) != t.support.end()) {
      throw std::invalid_argument("term " + std::to_string(i) + " support must be sorted and duplicate-free");
    }
    if (static_cast<std::size_t>(t.matrix.rows()) != expect || static_cast<std::size_t>(t.matrix.cols()) != expect) {
      throw std::invalid_argument("term " + std::to_string(i) + " matrix size does not match its support");
    }
    LiveTerm lt{i, t.support, t.matrix};
    prune_term(lt, s.site_dims, tol.prune);
    if (lt.support.empty()) {
      s.constants.emplace_back(i, lt.matrix(0, 0).real());
    } else {
      s.remaining.push_back(std::move(lt));
    }
  }
  return s;
}

bool has_intersections(const LoopState &state) {
  std::set<std::size_t> seen;
  for (const auto &t : state.remaining) {
    for (auto s : t.support) {
      if (!seen.insert(s).second) return true;
    }
  }
  return false;
}

std::vector<std::size_t> overlap_set(const LoopState &state, std::size_t v) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < state.remaining.size(); ++j) {
    if (j == v) continue;
    if (shared_count(state.remaining[v].support, state.remaining[j].support) >= 2) out.push_back(j);
  }
  return out;
}

std::size_t choose_term(const LoopState &state) {
  if (state.remaining.empty()) throw std::logic_error("no remaining terms to choose from");
  std::size_t best = 0, best_pen = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < state.remaining.size(); ++i) {
    const std::size_t p = overlap_set(state, i).size();
    if (p < best_pen) {
      best_pen = p;
      best = i;
    }
  }
  return best;
}

PreparedStep prepare_isolation(const LoopState &state, std::size_t v, const ClhTolerances &tol, std::uint64_t seed) {
  if (v >= state.remaining.size()) throw std::out_of_range("chosen term is not in the remaining set");
  PreparedStep step;
  step.v = v;
  step.removed = overlap_set(state, v);
  const LiveTerm &term = state.remaining[v];
  const auto vdims = dims_of(state.site_dims, term.support);
  for (std::size_t i = 0; i < term.support.size(); ++i) {
    const std::size_t q = term.support[i];
    auto left = induced_algebra(term.matrix, vdims, i, tol.num);
    std::vector<Mat> right;
    for (std::size_t j = 0; j < state.remaining.size(); ++j) {
      if (j == v || std::binary_search(step.removed.begin(), step.removed.end(), j)) continue;
      const auto &other = state.remaining[j];
      const std::size_t pos = position_of(other.support, q);
      if (pos == other.support.size()) continue;
      auto g = induced_algebra(other.matrix, dims_of(state.site_dims, other.support), pos, tol.num);
      right.insert(right.end(), g.begin(), g.end());
    }
    AlgebraOptions opts;
    opts.tol = tol.num;
    opts.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    QuditDecomposition dec;
    try {
      dec = structure_decomposition(left, right, state.site_dims[q], opts);
    } catch (const DecompositionError &e) {
      throw DecompositionError("term " + std::to_string(term.origin) + ", site " + std::to_string(q) + ": " + e.what());
    }
    dec.site = q;
    step.decompositions.push_back(std::move(dec));
  }
  return step;
}

StepOutcome apply_isolation(const LoopState &state, const PreparedStep &step, const std::vector<std::size_t> &blocks,
                            const ClhTolerances &tol) {
  StepOutcome out;
  out.state = state;
  LoopState &s = out.state;
  IterationRecord &rec = out.record;
  if (step.v >= state.remaining.size()) {
    out.issues.push_back("chosen term position out of range");
    return out;
  }
  const LiveTerm &v0 = state.remaining[step.v];
  rec.chosen = v0.origin;
  rec.decompositions = step.decompositions;
  rec.chosen_blocks = blocks;
  if (step.decompositions.size() != v0.support.size()) {
    out.issues.push_back("expected one decomposition per site of term " + std::to_string(v0.origin));
    return out;
  }
  if (blocks.size() != step.decompositions.size()) {
    out.issues.push_back("expected one block index per site of term " + std::to_string(v0.origin));
    return out;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto &dec = step.decompositions[i];
    if (dec.site != v0.support[i] || dec.dim != state.site_dims[dec.site]) {
      out.issues.push_back("decomposition " + std::to_string(i) + " does not match site " +
                           std::to_string(v0.support[i]));
      return out;
    }
    if (blocks[i] >= dec.blocks.size()) {
      out.issues.push_back("block index " + std::to_string(blocks[i]) + " out of range at site " +
                           std::to_string(dec.site));
      return out;
    }
    const auto &b = dec.blocks[blocks[i]];
    if (b.isometry.rows() != dec.dim || b.isometry.cols() != b.left_dim * b.right_dim || b.left_dim < 1 ||
        b.right_dim < 1) {
      out.issues.push_back("block shape mismatch at site " + std::to_string(dec.site));
      return out;
    }
  }

  const std::size_t dim_before = state.remaining_dimension();

  // Isolate.
  std::vector<LiveTerm> kept;
  LiveTerm v = v0;
  for (std::size_t j = 0; j < state.remaining.size(); ++j) {
    if (j == step.v) continue;
    if (std::binary_search(step.removed.begin(), step.removed.end(), j)) {
      rec.removed.push_back(state.remaining[j].origin);
    } else {
      kept.push_back(state.remaining[j]);
    }
  }
  std::sort(rec.removed.begin(), rec.removed.end());
  s.bad.insert(s.bad.end(), rec.removed.begin(), rec.removed.end());

  // Isometries: split every site of v into (left, right).
  std::vector<std::size_t> left_sites, right_sites;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto &dec = step.decompositions[i];
    const auto &b = dec.blocks[blocks[i]];
    const std::size_t q = dec.site;
    const Mat &u = b.isometry;
    rec.reconstruction_error =
        std::max(rec.reconstruction_error, dense::max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols())));
    const Mat p = u * u.adjoint();
    const Mat comp = Mat::Identity(dec.dim, dec.dim) - p;

    const std::size_t ql = s.site_dims.size();
    const std::size_t qr = ql + 1;
    s.site_dims.push_back(b.left_dim);
    s.site_dims.push_back(b.right_dim);
    s.splits.push_back({q, ql, qr, u});
    left_sites.push_back(ql);
    right_sites.push_back(qr);

    auto split_term = [&](LiveTerm &t) {
      const std::size_t pos = position_of(t.support, q);
      if (pos == t.support.size()) return;
      auto dims = dims_of(s.site_dims, t.support);
      // Block invariance: the term must not leak out of the chosen block.
      Mat leak = dense::embed(comp, {pos}, dims) * t.matrix * dense::embed(p, {pos}, dims);
      rec.reconstruction_error = std::max(rec.reconstruction_error, dense::max_abs(leak));
      t.matrix = dense::conjugate_site(t.matrix, dims, pos, u);
      t.support[pos] = ql;
      t.support.insert(t.support.begin() + static_cast<std::ptrdiff_t>(pos) + 1, qr);
      canonicalize(t, s.site_dims);
    };
    split_term(v);
    for (auto &t : kept) split_term(t);
  }

  // Prune.
  prune_term(v, s.site_dims, tol.prune);
  for (auto &t : kept) prune_term(t, s.site_dims, tol.prune);

  for (auto r : right_sites) {
    if (std::binary_search(v.support.begin(), v.support.end(), r)) {
      out.issues.push_back("isolated term " + std::to_string(v.origin) + " still acts on the shared factor of a split site");
    }
  }
  for (const auto &t : kept) {
    for (auto l : left_sites) {
      if (std::binary_search(t.support.begin(), t.support.end(), l)) {
        out.issues.push_back("term " + std::to_string(t.origin) + " acts on the isolated factor of a split site");
      }
    }
  }

  if (v.support.empty()) {
    const double c = v.matrix(0, 0).real();
    s.constants.emplace_back(v.origin, c);
    rec.pruned_terms.push_back(v.origin);
    rec.pruned_values.push_back(c);
  } else {
    s.good.push_back(v);
  }
  s.remaining.clear();
  for (auto &t : kept) {
    if (t.support.empty()) {
      const double c = t.matrix(0, 0).real();
      s.constants.emplace_back(t.origin, c);
      rec.pruned_terms.push_back(t.origin);
      rec.pruned_values.push_back(c);
    } else {
      s.remaining.push_back(std::move(t));
    }
  }

  const std::size_t dim_after = s.remaining_dimension();
  rec.dimension_removed = dim_before >= dim_after ? dim_before - dim_after : 0;
  for (std::size_t a = 0; a < s.remaining.size(); ++a) {
    for (std::size_t b = a + 1; b < s.remaining.size(); ++b) {
      if (!shares_site(s.remaining[a].support, s.remaining[b].support)) continue;
      rec.commutation_error =
          std::max(rec.commutation_error, commutator_norm(s.remaining[a], s.remaining[b], s.site_dims));
    }
  }
  return out;
}

StepOutcome isolate_and_split(const LoopState &state, std::size_t v, const std::vector<std::size_t> &blocks,
                              const ClhTolerances &tol, std::uint64_t seed) {
  PreparedStep step = prepare_isolation(state, v, tol, seed);
  StepOutcome out = apply_isolation(state, step, blocks, tol);
  if (!out.issues.empty()) throw DecompositionError(out.issues.front());
  return out;
}

LoopState finalize(const LoopState &state) {
  LoopState s = state;
  for (auto &t : s.remaining) s.good.push_back(std::move(t));
  s.remaining.clear();
  return s;
}

namespace {

const Eigen::SelfAdjointEigenSolver<Mat> &solve(const LiveTerm &term, Eigen::SelfAdjointEigenSolver<Mat> &es) {
  es.compute(term.matrix);
  return es;
}

}  // namespace

double level_energy(const LiveTerm &term, std::size_t level) {
  Eigen::SelfAdjointEigenSolver<Mat> es;
  solve(term, es);
  if (level >= static_cast<std::size_t>(es.eigenvalues().size())) throw std::out_of_range("eigen level out of range");
  return es.eigenvalues()(static_cast<Eigen::Index>(level));
}

dense::Vec pull_back_state(const LoopState &final_state, std::size_t n, const std::vector<std::size_t> &levels) {
  const auto &dims_by_site = final_state.site_dims;
  std::vector<char> is_parent(dims_by_site.size(), 0);
  for (const auto &sp : final_state.splits) is_parent[sp.parent] = 1;

  dense::Vec psi = dense::Vec::Ones(1);
  std::vector<std::size_t> order;
  std::vector<int> dims;
  std::vector<char> placed(dims_by_site.size(), 0);
  for (std::size_t g = 0; g < final_state.good.size(); ++g) {
    const auto &term = final_state.good[g];
    const std::size_t level = g < levels.size() ? levels[g] : 0;
    Eigen::SelfAdjointEigenSolver<Mat> es;
    solve(term, es);
    if (level >= static_cast<std::size_t>(es.eigenvalues().size())) throw std::out_of_range("eigen level out of range");
    psi = dense::kron(psi, dense::Vec(es.eigenvectors().col(static_cast<Eigen::Index>(level))));
    for (auto site : term.support) {
      if (placed[site] || is_parent[site]) throw std::logic_error("good terms overlap or act on a split site");
      placed[site] = 1;
      order.push_back(site);
      dims.push_back(dims_by_site[site]);
    }
  }
  for (std::size_t site = 0; site < dims_by_site.size(); ++site) {
    if (placed[site] || is_parent[site]) continue;
    dense::Vec zero = dense::Vec::Zero(dims_by_site[site]);
    zero(0) = 1.0;
    psi = dense::kron(psi, zero);
    order.push_back(site);
    dims.push_back(dims_by_site[site]);
  }

  for (auto it = final_state.splits.rbegin(); it != final_state.splits.rend(); ++it) {
    const std::size_t pl = position_of(order, it->left);
    const std::size_t pr = position_of(order, it->right);
    if (pl == order.size() || pr == order.size()) throw std::logic_error("split children missing from state");
    std::vector<std::size_t> perm{pl, pr};
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i != pl && i != pr) perm.push_back(i);
    }
    psi = dense::permute(psi, dims, perm);
    const Eigen::Index child = static_cast<Eigen::Index>(dims[pl]) * dims[pr];
    const Eigen::Index rest = psi.size() / child;
    Eigen::Map<const Mat> x(psi.data(), rest, child);
    Mat y = x * it->isometry.transpose();
    dense::Vec next = Eigen::Map<const dense::Vec>(y.data(), y.size());
    std::vector<std::size_t> new_order{it->parent};
    std::vector<int> new_dims{dims_by_site[it->parent]};
    for (std::size_t i = 2; i < perm.size(); ++i) {
      new_order.push_back(order[perm[i]]);
      new_dims.push_back(dims[perm[i]]);
    }
    psi = std::move(next);
    order = std::move(new_order);
    dims = std::move(new_dims);
  }
  if (order.size() != n) throw std::logic_error("pulled-back state does not cover the original qudits");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = position_of(order, i);
    if (p == order.size()) throw std::logic_error("pulled-back state misses an original qudit");
    perm[i] = p;
  }
  return dense::permute(psi, dims, perm);
}

namespace {

std::size_t state_rows(const LoopState &s) {
  std::vector<char> is_parent(s.site_dims.size(), 0);
  for (const auto &sp : s.splits) is_parent[sp.parent] = 1;
  std::size_t rows = 1;
  for (std::size_t i = 0; i < s.site_dims.size(); ++i) {
    if (!is_parent[i]) rows *= static_cast<std::size_t>(s.site_dims[i]);
  }
  return rows;
}

double predicted_energy(const LoopState &final_state, const std::vector<std::size_t> &levels) {
  double e = final_state.constant_energy();
  for (std::size_t g = 0; g < final_state.good.size(); ++g) {
    e += level_energy(final_state.good[g], g < levels.size() ? levels[g] : 0);
  }
  return e;
}

struct Searcher {
  explicit Searcher(const ApproxOptions &o) : opt(o) {}
  const ApproxOptions &opt;
  double floor = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<IterationRecord> best_records;
  LoopState best_state;
  std::uint64_t leaves = 0;
  std::uint64_t nodes = 0;
  bool done = false;
  bool exhausted = false;

  void dfs(const LoopState &s, std::vector<IterationRecord> &records) {
    if (done) return;
    if (++nodes > 20 * opt.leaf_budget) {
      exhausted = done = true;
      return;
    }
    if (!has_intersections(s)) {
      ++leaves;
      LoopState f = finalize(s);
      const double e = predicted_energy(f, {});
      if (e < best - 1e-12) {
        best = e;
        best_records = records;
        best_state = std::move(f);
      }
      if (best <= floor + 1e-10) done = true;
      if (leaves >= opt.leaf_budget && !done) exhausted = done = true;
      return;
    }
    const std::size_t v = choose_term(s);
    PreparedStep step = prepare_isolation(s, v, opt.tol, derive_seed(opt.seed, static_cast<std::uint64_t>(records.size())));
    std::size_t total = 1;
    for (const auto &d : step.decompositions) total *= d.blocks.size();
    std::vector<std::pair<double, StepOutcome>> children;
    children.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<std::size_t> tuple(step.decompositions.size());
      std::size_t rem = idx;
      for (std::size_t i = step.decompositions.size(); i-- > 0;) {
        tuple[i] = rem % step.decompositions[i].blocks.size();
        rem /= step.decompositions[i].blocks.size();
      }
      StepOutcome child = apply_isolation(s, step, tuple, opt.tol);
      if (!child.issues.empty()) throw DecompositionError(child.issues.front());
      const double lb = lower_bound_energy(child.state);
      children.emplace_back(lb, std::move(child));
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto &[lb, child] : children) {
      if (done) return;
      if (lb >= best - 1e-12) continue;
      records.push_back(child.record);
      dfs(child.state, records);
      records.pop_back();
    }
  }
};

}  // namespace

ApproxResult approximate_ground(const CLHInstance &instance, const ApproxOptions &options) {
  ApproxResult res;
  res.num_terms = instance.terms.size();
  const BipartiteGraph graph = from_clh(instance, options.tol.prune);
  res.locality = graph.max_left_degree();
  if (graph.n() > 0 && graph.max_right_degree() > 0) {
    res.eps = expansion_error_exact(graph, std::max<std::size_t>(1, res.locality)).eps;
  }
  const double eps = boost::rational_cast<double>(res.eps);

  LoopState s0 = initial_state(instance, options.tol);
  std::vector<IterationRecord> records;
  LoopState final_state;
  if (options.strategy == BlockStrategy::prover_indices) {
    LoopState s = s0;
    while (has_intersections(s)) {
      const std::size_t it = records.size();
      if (it > instance.terms.size()) throw std::logic_error("loop failed to make progress");
      const std::size_t v = choose_term(s);
      PreparedStep step = prepare_isolation(s, v, options.tol, derive_seed(options.seed, static_cast<std::uint64_t>(it)));
      std::vector<std::size_t> blocks(step.decompositions.size(), 0);
      if (it < options.prover_blocks.size()) {
        if (options.prover_blocks[it].size() != blocks.size()) {
          throw std::invalid_argument("prover block list for iteration " + std::to_string(it) + " has " +
                                      std::to_string(options.prover_blocks[it].size()) + " entries, expected " +
                                      std::to_string(blocks.size()));
        }
        blocks = options.prover_blocks[it];
      }
      StepOutcome o = apply_isolation(s, step, blocks, options.tol);
      if (!o.issues.empty()) throw DecompositionError(o.issues.front());
      records.push_back(o.record);
      s = std::move(o.state);
    }
    final_state = finalize(s);
    res.leaves = 1;
  } else {
    Searcher searcher(options);
    for (const auto &t : instance.terms) searcher.floor += min_eigenvalue(t.matrix);
    std::vector<IterationRecord> stack;
    searcher.dfs(s0, stack);
    if (!std::isfinite(searcher.best)) throw BudgetExceeded("block search found no complete transcript within budget");
    records = std::move(searcher.best_records);
    final_state = std::move(searcher.best_state);
    res.search_exhausted = searcher.exhausted;
    res.leaves = searcher.leaves;
  }

  res.iterations = records.size();
  res.bad_count = final_state.bad.size();
  res.predicted_energy = predicted_energy(final_state, options.levels);
  for (const auto &r : records) {
    res.max_reconstruction_error = std::max(res.max_reconstruction_error, r.reconstruction_error);
    for (const auto &d : r.decompositions) {
      res.max_reconstruction_error = std::max(res.max_reconstruction_error, d.reconstruction_error);
    }
    res.max_commutation_error = std::max(res.max_commutation_error, r.commutation_error);
    const double allowed = 2.0 * static_cast<double>(graph.max_right_degree()) * eps *
                           static_cast<double>(r.dimension_removed);
    if (static_cast<double>(r.removed.size()) > allowed + 1e-9) res.amortized_holds = false;
  }
  res.bad_bound = 2.0 * static_cast<double>(res.locality) * instance.d * eps * static_cast<double>(res.num_terms);
  res.bad_bound_holds = static_cast<double>(res.bad_count) <= res.bad_bound + 1e-9;

  DecompositionWitness &w = res.witness;
  w.iterations = records;
  for (const auto &g : final_state.good) w.good_terms.push_back(g.origin);
  w.good_levels.assign(final_state.good.size(), 0);
  for (std::size_t g = 0; g < w.good_levels.size() && g < options.levels.size(); ++g) w.good_levels[g] = options.levels[g];
  w.bad_terms = final_state.bad;

  if (state_rows(final_state) <= options.state_row_cap) {
    std::size_t full = 1;
    bool fits = true;
    for (std::size_t i = 0; i < instance.n; ++i) {
      full *= static_cast<std::size_t>(instance.d);
      if (full > options.state_row_cap) fits = false;
    }
    if (fits) {
      res.state = pull_back_state(final_state, instance.n, w.good_levels);
      res.energy = energy_of(instance, *res.state);
    }
  }
  if (!res.state) res.energy = res.predicted_energy;
  w.claimed_energy = res.energy;
  return res;
}

VerifyReport verify_witness(const CLHInstance &instance, const DecompositionWitness &witness,
                            const ClhTolerances &tol, std::size_t state_row_cap) {
  VerifyReport rep;
  auto fail = [&](const std::string &msg) {
    rep.ok = false;
    rep.issues.push_back(msg);
  };
  LoopState s = initial_state(instance, tol);
  const double structure_tol = 1e-7;
  for (std::size_t it = 0; it < witness.iterations.size(); ++it) {
    const auto &rec = witness.iterations[it];
    const std::string where = "iteration " + std::to_string(it) + ": ";
    if (!has_intersections(s)) {
      fail(where + "transcript continues after the remaining terms became disjoint");
      return rep;
    }
    std::size_t v = s.remaining.size();
    for (std::size_t i = 0; i < s.remaining.size(); ++i) {
      if (s.remaining[i].origin == rec.chosen) v = i;
    }
    if (v == s.remaining.size()) {
      fail(where + "chosen term " + std::to_string(rec.chosen) + " is not in the remaining set");
      return rep;
    }
    PreparedStep step;
    step.v = v;
    step.removed = overlap_set(s, v);
    std::vector<std::size_t> expected;
    for (auto j : step.removed) expected.push_back(s.remaining[j].origin);
    std::sort(expected.begin(), expected.end());
    std::vector<std::size_t> claimed = rec.removed;
    std::sort(claimed.begin(), claimed.end());
    if (expected != claimed) fail(where + "removed set differs from the terms overlapping the chosen term twice or more");
    step.decompositions = rec.decompositions;
    for (const auto &dec : rec.decompositions) {
      if (dec.dim < 1) {
        fail(where + "decomposition with non-positive dimension");
        return rep;
      }
      Mat total = Mat::Zero(dec.dim, dec.dim);
      for (const auto &b : dec.blocks) {
        if (b.isometry.rows() != dec.dim || b.isometry.cols() != b.left_dim * b.right_dim) {
          fail(where + "block isometry shape mismatch at site " + std::to_string(dec.site));
          return rep;
        }
        const double e = dense::max_abs(b.isometry.adjoint() * b.isometry - Mat::Identity(b.isometry.cols(), b.isometry.cols()));
        rep.max_isometry_error = std::max(rep.max_isometry_error, e);
        total += b.isometry * b.isometry.adjoint();
      }
      const double c = dense::max_abs(total - Mat::Identity(dec.dim, dec.dim));
      rep.max_isometry_error = std::max(rep.max_isometry_error, c);
    }
    if (rep.max_isometry_error > structure_tol) fail(where + "block isometries are not orthonormal and complete");
    StepOutcome o = apply_isolation(s, step, rec.chosen_blocks, tol);
    for (const auto &msg : o.issues) fail(where + msg);
    if (!o.issues.empty()) return rep;
    rep.max_invariance_error = std::max(rep.max_invariance_error, o.record.reconstruction_error);
    if (o.record.reconstruction_error > structure_tol) fail(where + "chosen blocks are not invariant under the terms");
    s = std::move(o.state);
  }
  if (has_intersections(s)) {
    fail("transcript ends while remaining terms still intersect");
    return rep;
  }
  LoopState f = finalize(s);
  std::vector<std::size_t> good;
  for (const auto &g : f.good) good.push_back(g.origin);
  if (good != witness.good_terms) fail("good-term list does not match the replay");
  std::vector<std::size_t> bad_replay = f.bad, bad_claim = witness.bad_terms;
  std::sort(bad_replay.begin(), bad_replay.end());
  std::sort(bad_claim.begin(), bad_claim.end());
  if (bad_replay != bad_claim) fail("bad-term list does not match the replay");
  rep.bad_count = f.bad.size();
  std::vector<std::size_t> levels = witness.good_levels;
  if (!levels.empty() && levels.size() != f.good.size()) {
    fail("level list length does not match the good terms");
    return rep;
  }
  try {
    rep.good_energy = predicted_energy(f, levels);
    std::size_t full = 1;
    for (std::size_t i = 0; i < instance.n; ++i) {
      full *= static_cast<std::size_t>(instance.d);
      if (full > state_row_cap) throw std::length_error("state exceeds the row cap");
    }
    dense::Vec psi = pull_back_state(f, instance.n, levels);
    rep.energy = energy_of(instance, psi);
  } catch (const std::exception &e) {
    fail(std::string("could not evaluate the final state: ") + e.what());
    return rep;
  }
  rep.claimed_energy_matches = std::abs(rep.energy - witness.claimed_energy) <= 1e-8 * std::max(1.0, std::abs(rep.energy));
  if (!rep.claimed_energy_matches) fail("claimed energy does not match the replayed state");
  rep.energy_bound_holds = rep.energy <= rep.good_energy + static_cast<double>(rep.bad_count) + 1e-8;
  if (!rep.energy_bound_holds) fail("energy exceeds the good-term energy plus the number of bad terms");
  return rep;
}

}  // namespace expandlab
