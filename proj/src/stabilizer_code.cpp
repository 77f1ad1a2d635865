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

#include "expandlab/stabilizer_code.hpp"

#include <algorithm>
#include <sstream>

namespace expandlab {

std::string to_string(ValidationFailure f) {
  switch (f) {
    case ValidationFailure::none:
      return "none";
    case ValidationFailure::non_commuting:
      return "non_commuting";
    case ValidationFailure::locality:
      return "locality";
    case ValidationFailure::dependent:
      return "dependent";
    case ValidationFailure::trivial_qudit:
      return "trivial_qudit";
    case ValidationFailure::system_mismatch:
      return "system_mismatch";
  }
  return "unknown";
}

CodeValidationError::CodeValidationError(ValidationReport report)
    : std::invalid_argument("invalid stabilizer code: " + report.message), report_(std::move(report)) {}

namespace {

std::vector<zd::Vec> centralizer_completion(const std::vector<zd::Vec> &gens, std::size_t n, int d) {
  zd::RowSpace span(2 * n, d);
  std::vector<zd::Vec> basis;
  for (const auto &g : gens) {
    span.add(g);
    basis.push_back(g);
  }
  for (const auto &v : zd::symplectic_complement(gens, n, d)) {
    if (span.add(v)) basis.push_back(v);
  }
  return basis;
}

}  // namespace

StabilizerCode::StabilizerCode(QuditSystem system, std::vector<PauliOp> generators, std::size_t k)
    : system_(system),
      generators_(std::move(generators)),
      k_(k),
      on_qudit_(system.n),
      group_space_(2 * system.n, system.d),
      centralizer_solver_(system.n, system.d, {}),
      stabilizer_solver_(system.n, system.d, {}) {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    supports_.push_back(generators_[i].support());
    for (auto q : supports_.back()) on_qudit_[q].push_back(i);
    vectors_.push_back(generators_[i].symplectic_vector());
    group_space_.add(vectors_.back());
  }
  for (const auto &l : on_qudit_) max_right_degree_ = std::max(max_right_degree_, l.size());
  centralizer_basis_ = centralizer_completion(vectors_, system.n, system.d);
  centralizer_solver_ = CosetSolver(system.n, system.d, vectors_);
  stabilizer_solver_ = CosetSolver(system.n, system.d, centralizer_basis_);
}

ValidationReport check_generators(const std::vector<PauliOp> &generators, std::size_t k) {
  ValidationReport rep;
  if (generators.empty()) {
    rep.failure = ValidationFailure::trivial_qudit;
    rep.indices = {0};
    rep.message = "no generators: every qudit is trivial";
    return rep;
  }
  const QuditSystem sys = generators.front().system();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!(generators[i].system() == sys)) {
      rep.failure = ValidationFailure::system_mismatch;
      rep.indices = {i};
      rep.message = "generator " + std::to_string(i) + " lives on a different qudit system";
      return rep;
    }
  }
  if (!is_prime(sys.d)) {
    throw std::domain_error("code validation needs prime d (independence uses Z_d row reduction)");
  }
  std::size_t max_w = 0;
  for (const auto &g : generators) max_w = std::max(max_w, weight(g));
  if (k == 0) k = max_w;
  rep.k = k;

  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (!commutes(generators[i], generators[j])) {
        rep.failure = ValidationFailure::non_commuting;
        rep.indices = {i, j};
        rep.message = "generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute";
        return rep;
      }
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (weight(generators[i]) > k) {
      rep.failure = ValidationFailure::locality;
      rep.indices = {i};
      rep.message = "generator " + std::to_string(i) + " has weight " + std::to_string(weight(generators[i])) +
                    " > k = " + std::to_string(k);
      return rep;
    }
  }
  zd::RowSpace span(2 * sys.n, sys.d);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!span.add(generators[i].symplectic_vector())) {
      rep.failure = ValidationFailure::dependent;
      rep.indices = {i};
      rep.message = "generator " + std::to_string(i) + " lies in the group generated by the earlier generators";
      return rep;
    }
  }
  std::vector<std::size_t> degree(sys.n, 0);
  for (const auto &g : generators) {
    for (auto q : g.support()) ++degree[q];
  }
  for (std::size_t q = 0; q < sys.n; ++q) {
    if (degree[q] == 0) {
      rep.failure = ValidationFailure::trivial_qudit;
      rep.indices = {q};
      rep.message = "qudit " + std::to_string(q) + " is not acted on by any generator";
      return rep;
    }
  }
  rep.valid = true;
  rep.max_right_degree = *std::max_element(degree.begin(), degree.end());
  rep.message = "ok";
  return rep;
}

StabilizerCode validate(const std::vector<PauliOp> &generators, std::size_t k) {
  ValidationReport rep = check_generators(generators, k);
  if (!rep.valid) throw CodeValidationError(rep);
  return StabilizerCode(generators.front().system(), generators, rep.k);
}

Syndrome syndrome(const StabilizerCode &code, const PauliOp &e) {
  if (!(e.system() == code.system())) throw std::invalid_argument("error lives on a different qudit system");
  Syndrome s;
  for (std::size_t i = 0; i < code.num_generators(); ++i) {
    if (!commutes(code.generator(i), e)) s.violated.push_back(i);
  }
  return s;
}

std::size_t penalty(const StabilizerCode &code, const PauliOp &e) { return syndrome(code, e).size(); }

bool in_group(const StabilizerCode &code, const PauliOp &e) {
  if (!(e.system() == code.system())) throw std::invalid_argument("error lives on a different qudit system");
  return code.group_space().contains(e.symplectic_vector());
}

bool in_centralizer(const StabilizerCode &code, const PauliOp &e) { return syndrome(code, e).empty(); }

std::optional<CosetWeight> coset_min_weight_detailed(const StabilizerCode &code, const PauliOp &e, CosetMode mode,
                                                     std::size_t cap, std::uint64_t node_budget) {
  if (!(e.system() == code.system())) throw std::invalid_argument("error lives on a different qudit system");
  const CosetSolver &solver = mode == CosetMode::centralizer ? code.centralizer_solver() : code.stabilizer_solver();
  const zd::Vec ev = e.symplectic_vector();
  std::vector<int> target = solver.syndrome_of(ev);
  // E itself is always a member of its coset, so the search never needs to go past weight(E).
  const std::size_t w_e = weight(e);
  const std::size_t search_cap = std::min(cap, w_e == 0 ? 0 : w_e - 1);
  auto found = solver.min_weight(target, search_cap, node_budget);
  if (found) return CosetWeight{found->weight, from_symplectic(code.system(), found->representative)};
  if (w_e <= cap) return CosetWeight{w_e, PauliOp(code.system(), e.x_exps(), e.z_exps())};
  return std::nullopt;
}

std::optional<std::size_t> coset_min_weight(const StabilizerCode &code, const PauliOp &e, CosetMode mode,
                                            std::size_t cap, std::uint64_t node_budget) {
  auto r = coset_min_weight_detailed(code, e, mode, cap, node_budget);
  if (!r) return std::nullopt;
  return r->weight;
}

std::optional<std::size_t> coset_min_weight_brute(const StabilizerCode &code, const PauliOp &e, CosetMode mode,
                                                  std::size_t cap) {
  const std::size_t n = code.n();
  const int d = code.d();
  const zd::Vec ev = e.symplectic_vector();
  const auto esyn = syndrome(code, e);
  for (std::size_t w = 0; w <= cap && w <= n; ++w) {
    bool found = false;
    for_each_word_of_weight(n, d, w, [&](const auto &, const std::vector<int> &x, const std::vector<int> &z) {
      PauliOp cand(code.system(), x, z);
      bool ok;
      if (mode == CosetMode::centralizer) {
        ok = syndrome(code, cand) == esyn;
      } else {
        zd::Vec diff(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
          diff[i] = zd::mod(x[i] - ev[i], d);
          diff[n + i] = zd::mod(z[i] - ev[n + i], d);
        }
        ok = code.group_space().contains(diff);
      }
      if (ok) found = true;
      return !found;
    });
    if (found) return w;
  }
  return std::nullopt;
}

namespace {

// Fast syndrome-emptiness test for a word given as full x/z arrays with a known support.
bool commutes_with_all(const StabilizerCode &code, const std::vector<std::size_t> &support, const std::vector<int> &x,
                       const std::vector<int> &z, std::vector<long long> &acc, std::vector<std::size_t> &touched) {
  touched.clear();
  for (auto q : support) {
    for (auto g : code.generators_on(q)) {
      if (acc[g] == 0 && std::find(touched.begin(), touched.end(), g) == touched.end()) touched.push_back(g);
      const PauliOp &gen = code.generator(g);
      acc[g] += static_cast<long long>(gen.x(q)) * z[q] - static_cast<long long>(gen.z(q)) * x[q];
    }
  }
  bool ok = true;
  for (auto g : touched) {
    if (zd::mod(acc[g], code.d()) != 0) ok = false;
    acc[g] = 0;
  }
  return ok;
}

}  // namespace

DistanceResult distance(const StabilizerCode &code, std::size_t cap) {
  const std::size_t n = code.n();
  std::vector<long long> acc(code.num_generators(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t w = 1; w <= cap && w <= n; ++w) {
    std::optional<PauliOp> witness;
    for_each_word_of_weight(n, code.d(), w,
                            [&](const std::vector<std::size_t> &support, const std::vector<int> &x,
                                const std::vector<int> &z) {
                              if (!commutes_with_all(code, support, x, z, acc, touched)) return true;
                              PauliOp cand(code.system(), x, z);
                              if (in_group(code, cand)) return true;
                              witness = cand;
                              return false;
                            });
    if (witness) return DistanceResult{w, witness};
  }
  return DistanceResult{std::nullopt, std::nullopt};
}

std::optional<std::size_t> distance_by_centralizer_enumeration(const StabilizerCode &code,
                                                               std::uint64_t max_elements) {
  const std::size_t n = code.n();
  const int d = code.d();
  const auto basis = zd::symplectic_complement(code.generator_vectors(), n, d);
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    total *= static_cast<unsigned>(d);
    if (total > max_elements) throw BudgetExceeded("centralizer too large to enumerate");
  }
  std::optional<std::size_t> best;
  std::vector<int> coeff(basis.size(), 0);
  zd::Vec v(2 * n, 0);
  while (true) {
    // v is the current combination of basis vectors.
    std::size_t w = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if (v[q] != 0 || v[n + q] != 0) ++w;
    }
    if (w > 0 && (!best || w < *best) && !code.group_space().contains(v)) best = w;
    std::size_t i = 0;
    while (i < basis.size()) {
      ++coeff[i];
      for (std::size_t j = 0; j < 2 * n; ++j) v[j] = zd::mod(v[j] + basis[i][j], d);
      if (coeff[i] < d) break;
      coeff[i] = 0;  // adding the d-th copy wrapped v back
      ++i;
    }
    if (i == basis.size()) break;
  }
  return best;
}

NocommuteReport check_nocommute_per_qudit(const StabilizerCode &code) {
  NocommuteReport rep;
  rep.pairs.resize(code.n());
  for (std::size_t q = 0; q < code.n(); ++q) {
    const auto &gens = code.generators_on(q);
    for (std::size_t a = 0; a < gens.size() && !rep.pairs[q]; ++a) {
      for (std::size_t b = a + 1; b < gens.size(); ++b) {
        if (!commutes(restrict(code.generator(gens[a]), q), restrict(code.generator(gens[b]), q))) {
          rep.pairs[q] = std::make_pair(gens[a], gens[b]);
          break;
        }
      }
    }
    if (!rep.pairs[q] && rep.holds) {
      rep.holds = false;
      rep.offending_qudit = q;
    }
  }
  return rep;
}

std::optional<std::size_t> min_group_weight(const StabilizerCode &code, std::size_t cap) {
  const std::size_t n = code.n();
  std::vector<long long> acc(code.num_generators(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t w = 1; w <= cap && w <= n; ++w) {
    bool found = false;
    for_each_word_of_weight(n, code.d(), w,
                            [&](const std::vector<std::size_t> &support, const std::vector<int> &x,
                                const std::vector<int> &z) {
                              if (!commutes_with_all(code, support, x, z, acc, touched)) return true;
                              if (in_group(code, PauliOp(code.system(), x, z))) found = true;
                              return !found;
                            });
    if (found) return w;
  }
  return std::nullopt;
}

bool has_group_weight_at_least(const StabilizerCode &code, std::size_t threshold) {
  if (threshold <= 1) return true;
  return !min_group_weight(code, threshold - 1).has_value();
}

}  // namespace expandlab
