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

#include "expandlab/code_zoo.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "expandlab/dense.hpp"
#include "expandlab/seeds.hpp"
#include "expandlab/zd_linalg.hpp"

namespace expandlab {

namespace {

void require_lattice(std::size_t L) {
  if (L < 2) throw std::invalid_argument("toric lattice size must be at least 2");
}

std::size_t torus_gap(std::size_t a, std::size_t b, std::size_t L) {
  const std::size_t diff = a > b ? a - b : b - a;
  return std::min(diff, L - diff);
}

std::size_t torus_distance(const LatticeSite &a, const LatticeSite &b, std::size_t L) {
  return torus_gap(a.first, b.first, L) + torus_gap(a.second, b.second, L);
}

// Edge between neighboring sites; nullopt if they are not torus neighbors.
std::optional<std::size_t> step_edge(std::size_t L, const LatticeSite &a, const LatticeSite &b, ChainKind kind) {
  const auto [i, j] = a;
  const std::size_t right = (j + 1) % L, left = (j + L - 1) % L;
  const std::size_t down = (i + 1) % L, up = (i + L - 1) % L;
  if (kind == ChainKind::z_primal) {
    if (b.first == i && b.second == right) return toric_h_edge(L, i, j);
    if (b.first == i && b.second == left) return toric_h_edge(L, i, left);
    if (b.second == j && b.first == down) return toric_v_edge(L, i, j);
    if (b.second == j && b.first == up) return toric_v_edge(L, up, j);
  } else {
    // Plaquette (i, j) is bounded by h(i, j), h(i+1, j), v(i, j), v(i, j+1).
    if (b.first == i && b.second == right) return toric_v_edge(L, i, right);
    if (b.first == i && b.second == left) return toric_v_edge(L, i, j);
    if (b.second == j && b.first == down) return toric_h_edge(L, down, j);
    if (b.second == j && b.first == up) return toric_h_edge(L, i, j);
  }
  return std::nullopt;
}

std::vector<std::size_t> random_subset(Rng &rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::size_t overlap(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

}  // namespace

std::size_t toric_h_edge(std::size_t L, std::size_t i, std::size_t j) { return (i % L) * L + (j % L); }
std::size_t toric_v_edge(std::size_t L, std::size_t i, std::size_t j) { return L * L + (i % L) * L + (j % L); }
std::size_t toric_num_qubits(std::size_t L) { return 2 * L * L; }

std::vector<PauliOp> toric_generators(std::size_t L) {
  require_lattice(L);
  const QuditSystem sys(toric_num_qubits(L), 2);
  std::vector<PauliOp> gens;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      if (i == L - 1 && j == L - 1) continue;
      PauliOp p(sys);
      for (auto e : {toric_h_edge(L, i, j), toric_h_edge(L, i + 1, j), toric_v_edge(L, i, j), toric_v_edge(L, i, j + 1)}) {
        p.set(e, 0, 1);
      }
      gens.push_back(std::move(p));
    }
  }
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      if (i == L - 1 && j == L - 1) continue;
      PauliOp s(sys);
      for (auto e : {toric_h_edge(L, i, j), toric_h_edge(L, i, j + L - 1), toric_v_edge(L, i, j),
                     toric_v_edge(L, i + L - 1, j)}) {
        s.set(e, 1, 0);
      }
      gens.push_back(std::move(s));
    }
  }
  return gens;
}

StabilizerCode toric_code(std::size_t L) { return validate(toric_generators(L), 4); }

std::optional<std::size_t> toric_plaquette_index(std::size_t L, std::size_t i, std::size_t j) {
  if (i >= L || j >= L) throw std::out_of_range("plaquette coordinate out of range");
  if (i == L - 1 && j == L - 1) return std::nullopt;
  return i * L + j;
}

std::optional<std::size_t> toric_star_index(std::size_t L, std::size_t i, std::size_t j) {
  if (i >= L || j >= L) throw std::out_of_range("star coordinate out of range");
  if (i == L - 1 && j == L - 1) return std::nullopt;
  return L * L - 1 + i * L + j;
}

PauliOp chain_error(std::size_t L, const std::vector<LatticeSite> &path, ChainKind kind) {
  require_lattice(L);
  PauliOp e(QuditSystem(toric_num_qubits(L), 2));
  std::set<std::size_t> used;
  for (const auto &s : path) {
    if (s.first >= L || s.second >= L) throw std::invalid_argument("path site outside the lattice");
  }
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    auto edge = step_edge(L, path[t], path[t + 1], kind);
    if (!edge) throw std::invalid_argument("path step " + std::to_string(t) + " joins non-adjacent sites");
    if (!used.insert(*edge).second) throw std::invalid_argument("path reuses an edge at step " + std::to_string(t));
    if (kind == ChainKind::z_primal) {
      e.set(*edge, 0, 1);
    } else {
      e.set(*edge, 1, 0);
    }
  }
  return e;
}

std::vector<LatticeSite> staircase_path(std::size_t L, LatticeSite start, std::size_t length) {
  require_lattice(L);
  std::vector<LatticeSite> path{start};
  for (std::size_t s = 0; s < length; ++s) {
    auto [i, j] = path.back();
    if (s % 2 == 0) {
      path.emplace_back(i, (j + 1) % L);
    } else {
      path.emplace_back((i + 1) % L, j);
    }
  }
  return path;
}

PauliOp scattered_chains(std::size_t L, std::size_t ell, std::size_t spacing, std::size_t count, ChainKind kind) {
  require_lattice(L);
  if (ell == 0) throw std::invalid_argument("chain length must be positive");
  const std::size_t rows = ell / 2;
  std::vector<std::vector<LatticeSite>> chains;
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t row = c * (rows + spacing);
    if (row + rows >= L || (ell + 1) / 2 >= L) throw std::invalid_argument("scattered chains do not fit on the lattice");
    chains.push_back(staircase_path(L, {row, 0}, ell));
  }
  for (std::size_t a = 0; a < chains.size(); ++a) {
    for (std::size_t b = a + 1; b < chains.size(); ++b) {
      for (const auto &s : chains[a]) {
        for (const auto &t : chains[b]) {
          if (torus_distance(s, t, L) < std::max<std::size_t>(spacing, 1)) {
            throw std::invalid_argument("scattered chains closer than the requested spacing");
          }
        }
      }
    }
  }
  PauliOp e(QuditSystem(toric_num_qubits(L), 2));
  for (const auto &path : chains) e = multiply(e, chain_error(L, path, kind));
  return e;
}

ClassicalParityCode classical_parity_code(BipartiteGraph graph) {
  for (std::size_t l = 0; l < graph.m(); ++l) {
    if (graph.left_degree(l) == 0) throw std::invalid_argument("check " + std::to_string(l) + " involves no bits");
  }
  return ClassicalParityCode{std::move(graph)};
}

std::size_t violated_checks(const ClassicalParityCode &code, const std::vector<std::size_t> &ones) {
  std::vector<std::size_t> cnt(code.graph.m(), 0);
  for (auto r : ones) {
    for (auto l : code.graph.constraints_on(r)) ++cnt[l];
  }
  return static_cast<std::size_t>(std::count_if(cnt.begin(), cnt.end(), [](std::size_t c) { return c % 2 == 1; }));
}

std::size_t unique_neighbor_checks(const ClassicalParityCode &code, const std::vector<std::size_t> &ones) {
  std::vector<std::size_t> cnt(code.graph.m(), 0);
  for (auto r : ones) {
    for (auto l : code.graph.constraints_on(r)) ++cnt[l];
  }
  return static_cast<std::size_t>(std::count(cnt.begin(), cnt.end(), std::size_t{1}));
}

namespace {

struct ClassicalSlot {
  std::uint64_t checked = 0;
  std::uint64_t bound_failures = 0;
  std::optional<std::vector<std::size_t>> bound_cex;
  std::uint64_t distance_failures = 0;
  std::optional<std::vector<std::size_t>> distance_cex;
};

class ClassicalWalker {
 public:
  ClassicalWalker(const BipartiteGraph &g, std::size_t max_weight, Rational eps, ClassicalSlot &slot)
      : g_(g), max_weight_(max_weight), eps_(eps), slot_(slot), cnt_(g.m(), 0) {}

  void run(std::size_t first) {
    push(first);
    visit();
    walk(first + 1);
    pop(first);
  }

 private:
  void push(std::size_t r) {
    set_.push_back(r);
    for (auto l : g_.constraints_on(r)) {
      const std::size_t c = ++cnt_[l];
      odd_ += (c % 2 == 1) ? 1 : -1;
      if (c == 1) ++unique_;
      if (c == 2) --unique_;
    }
  }
  void pop(std::size_t r) {
    for (auto l : g_.constraints_on(r)) {
      const std::size_t c = cnt_[l]--;
      odd_ += (c % 2 == 1) ? -1 : 1;
      if (c == 1) --unique_;
      if (c == 2) ++unique_;
    }
    set_.pop_back();
  }
  void visit() {
    ++slot_.checked;
    const Rational need = Rational(static_cast<std::int64_t>(set_.size() * g_.max_right_degree())) * (Rational(1) - 3 * eps_);
    if (Rational(odd_) < need) {
      ++slot_.bound_failures;
      if (!slot_.bound_cex) slot_.bound_cex = set_;
    }
    if (eps_ < Rational(1, 2) && unique_ == 0) {
      ++slot_.distance_failures;
      if (!slot_.distance_cex) slot_.distance_cex = set_;
    }
  }
  void walk(std::size_t from) {
    if (set_.size() >= max_weight_) return;
    for (std::size_t r = from; r < g_.n(); ++r) {
      push(r);
      visit();
      walk(r + 1);
      pop(r);
    }
  }

  const BipartiteGraph &g_;
  std::size_t max_weight_;
  Rational eps_;
  ClassicalSlot &slot_;
  std::vector<std::size_t> cnt_;
  std::vector<std::size_t> set_;
  std::int64_t odd_ = 0;
  std::int64_t unique_ = 0;
};

}  // namespace

ClassicalCheckReport classical_robustness_check(const ClassicalParityCode &code, std::size_t max_weight,
                                                unsigned threads) {
  const auto &g = code.graph;
  ClassicalCheckReport rep;
  rep.max_weight = max_weight;
  rep.max_right_degree = g.max_right_degree();
  rep.right_regular = g.is_right_regular();
  std::int64_t edges = 0;
  for (std::size_t l = 0; l < g.m(); ++l) edges += static_cast<std::int64_t>(g.left_degree(l));
  if (g.m() > 0) rep.average_left_degree = Rational(edges, static_cast<std::int64_t>(g.m()));
  if (max_weight == 0 || g.n() == 0) return rep;
  rep.eps = expansion_error_exact(g, max_weight, threads).eps;
  std::vector<ClassicalSlot> slots(g.n());
  parallel_for(g.n(), threads, [&](std::size_t first) {
    ClassicalWalker walker(g, max_weight, rep.eps, slots[first]);
    walker.run(first);
  });
  for (auto &s : slots) {
    rep.sets_checked += s.checked;
    rep.bound_failures += s.bound_failures;
    rep.distance_failures += s.distance_failures;
    if (!rep.bound_counterexample && s.bound_cex) rep.bound_counterexample = s.bound_cex;
    if (!rep.distance_counterexample && s.distance_cex) rep.distance_counterexample = s.distance_cex;
  }
  return rep;
}

BipartiteGraph random_left_regular_graph(std::size_t m, std::size_t n, std::size_t left_degree, std::uint64_t seed) {
  if (left_degree > n) throw std::invalid_argument("left degree exceeds the number of right vertices");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> adj(m);
  for (auto &row : adj) row = random_subset(rng, n, left_degree);
  return BipartiteGraph(m, n, std::move(adj));
}

namespace {

// Picks supports one at a time, favouring qudits that are still poorly covered.
// `candidates` is consumed in its (already shuffled) order; dependent supports are skipped.
std::vector<std::vector<std::size_t>> pick_supports(const std::vector<std::vector<std::size_t>> &candidates,
                                                    std::size_t n, std::size_t count, std::size_t cap) {
  std::vector<std::size_t> deg(n, 0);
  zd::RowSpace span(n, 2);
  std::vector<std::vector<std::size_t>> chosen;
  std::vector<char> used(candidates.size(), 0);
  while (chosen.size() < count) {
    std::size_t best = candidates.size();
    std::size_t best_score = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      const auto &s = candidates[c];
      if (!std::all_of(s.begin(), s.end(), [&](std::size_t q) { return deg[q] < cap; })) continue;
      std::size_t score = 0;
      for (auto q : s) score += cap - deg[q];
      if (best == candidates.size() || score > best_score) {
        best = c;
        best_score = score;
      }
    }
    if (best == candidates.size()) break;
    used[best] = 1;
    zd::Vec v(n, 0);
    for (auto q : candidates[best]) v[q] = 1;
    if (!span.add(v)) continue;
    for (auto q : candidates[best]) ++deg[q];
    chosen.push_back(candidates[best]);
  }
  return chosen;
}

template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn &&fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

StabilizerCode random_css_instance(const RandomCssOptions &opt, std::uint64_t seed) {
  if (opt.k == 0 || opt.k > opt.n) throw std::invalid_argument("generator weight must lie in [1, n]");
  if (opt.right_degree < 2) throw std::invalid_argument("right degree target must be at least 2 (one X and one Z check)");
  if (binomial(opt.n, opt.k) > 2'000'000) throw std::invalid_argument("too many candidate supports to enumerate");
  const QuditSystem sys(opt.n, 2);
  // Each type gets half of the degree budget; X takes the odd unit.
  const std::size_t cap_x = (opt.right_degree + 1) / 2, cap_z = opt.right_degree / 2;
  const std::size_t mx = std::max<std::size_t>(1, opt.n * cap_x / opt.k);
  const std::size_t mz = std::max<std::size_t>(1, opt.n * cap_z / opt.k);

  std::vector<std::vector<std::size_t>> all;
  for_each_subset(opt.n, opt.k, [&](const std::vector<std::size_t> &s) { all.push_back(s); });

  for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<std::vector<std::size_t>> pool = all;
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[uniform_below(rng, i)]);
    auto xs = pick_supports(pool, opt.n, mx, cap_x);
    if (xs.empty()) continue;
    std::vector<std::vector<std::size_t>> zpool;
    for (const auto &s : pool) {
      if (std::all_of(xs.begin(), xs.end(), [&](const auto &x) { return overlap(x, s) % 2 == 0; })) zpool.push_back(s);
    }
    auto zs = pick_supports(zpool, opt.n, mz, cap_z);
    if (zs.empty() || xs.size() + zs.size() >= opt.n) continue;  // keep at least one logical qudit

    std::vector<PauliOp> gens;
    for (const auto &s : xs) {
      PauliOp p(sys);
      for (auto q : s) p.set(q, 1, 0);
      gens.push_back(std::move(p));
    }
    for (const auto &s : zs) {
      PauliOp p(sys);
      for (auto q : s) p.set(q, 0, 1);
      gens.push_back(std::move(p));
    }
    if (!check_generators(gens, opt.k).valid) continue;
    StabilizerCode code = validate(gens, opt.k);
    if (code.max_right_degree() > opt.right_degree) continue;
    if (opt.min_distance > 1 && distance(code, opt.min_distance - 1).distance) continue;
    if (!has_group_weight_at_least(code, 2)) continue;
    return code;
  }
  throw GenerationFailure("no valid random CSS code after " + std::to_string(opt.max_attempts) + " attempts");
}

CLHInstance as_projector_clh(QuditSystem system, const std::vector<PauliOp> &generators) {
  CLHInstance inst;
  inst.d = system.d;
  inst.n = system.n;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto &op = generators[g];
    if (!(op.system() == system)) throw std::invalid_argument("generator " + std::to_string(g) + " has a different system");
    const auto supp = op.support();
    if (supp.empty()) throw std::invalid_argument("generator " + std::to_string(g) + " is proportional to the identity");
    std::vector<int> x, z;
    for (auto q : supp) {
      x.push_back(op.x(q));
      z.push_back(op.z(q));
    }
    const PauliOp local(QuditSystem(supp.size(), system.d), x, z, op.phase_exp());
    int order = 0;
    for (int j = 1; j <= 2 * system.d; ++j) {
      PauliOp pw = power(local, j);
      if (pw.is_identity_up_to_phase() && pw.phase_exp() == 0) {
        order = j;
        break;
      }
    }
    if (order == 0) throw std::invalid_argument("generator " + std::to_string(g) + " has no finite order");
    const dense::Mat gm = to_matrix(local);
    dense::Mat acc = dense::Mat::Zero(gm.rows(), gm.cols());
    dense::Mat pw = dense::Mat::Identity(gm.rows(), gm.cols());
    for (int j = 0; j < order; ++j) {
      acc += pw;
      pw = pw * gm;
    }
    ClhTerm term;
    term.support = supp;
    term.matrix = dense::Mat::Identity(gm.rows(), gm.cols()) - acc / static_cast<double>(order);
    inst.terms.push_back(std::move(term));
  }
  return inst;
}

CLHInstance as_projector_clh(const StabilizerCode &code) { return as_projector_clh(code.system(), code.generators()); }

}  // namespace expandlab
