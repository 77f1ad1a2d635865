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

#include "expandlab/coset_search.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace expandlab {

std::uint64_t env_budget(const char *name, std::uint64_t fallback) {
  const char *v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  char *end = nullptr;
  unsigned long long parsed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') return fallback;
  return static_cast<std::uint64_t>(parsed);
}

CosetSolver::CosetSolver(std::size_t n, int d, const std::vector<zd::Vec> &checks)
    : n_(n), d_(d), by_qudit_(n) {
  checks_.reserve(checks.size());
  for (std::size_t j = 0; j < checks.size(); ++j) {
    const zd::Vec &c = checks[j];
    if (c.size() != 2 * n) throw std::invalid_argument("check vector has wrong length");
    Check chk;
    for (std::size_t q = 0; q < n; ++q) {
      int cx = zd::mod(c[q], d);
      int cz = zd::mod(c[n + q], d);
      if (cx == 0 && cz == 0) continue;
      chk.qudits.push_back(q);
      by_qudit_[q].push_back({j, cx, cz});
    }
    checks_.push_back(std::move(chk));
  }
  for (const auto &inc : by_qudit_) max_qudit_degree_ = std::max(max_qudit_degree_, inc.size());
}

std::vector<int> CosetSolver::syndrome_of(const zd::Vec &word) const {
  std::vector<int> s(checks_.size(), 0);
  for (std::size_t q = 0; q < n_; ++q) {
    int x = word[q], z = word[n_ + q];
    if (x == 0 && z == 0) continue;
    for (const auto &inc : by_qudit_[q]) {
      s[inc.check] = zd::mod(s[inc.check] + static_cast<long long>(x) * inc.cz - static_cast<long long>(z) * inc.cx, d_);
    }
  }
  return s;
}

void CosetSolver::apply(std::vector<int> &residual, std::size_t &violated, std::size_t q, int x, int z,
                        int sign) const {
  for (const auto &inc : by_qudit_[q]) {
    int delta = zd::mod(static_cast<long long>(x) * inc.cz - static_cast<long long>(z) * inc.cx, d_);
    if (delta == 0) continue;
    int &r = residual[inc.check];
    bool was = r != 0;
    r = zd::mod(r - sign * delta, d_);
    bool now = r != 0;
    if (was && !now) --violated;
    if (!was && now) ++violated;
  }
}

bool CosetSolver::dfs(std::vector<int> &residual, std::size_t &violated, std::vector<char> &used, zd::Vec &word,
                      std::size_t depth_left, std::uint64_t &nodes, std::uint64_t budget) const {
  if (++nodes > budget) throw BudgetExceeded("coset search exceeded its node budget");
  if (violated == 0) return true;
  if (depth_left == 0) return false;
  if ((violated + max_qudit_degree_ - 1) / max_qudit_degree_ > depth_left) return false;

  std::size_t best = checks_.size();
  for (std::size_t j = 0; j < checks_.size(); ++j) {
    if (residual[j] == 0) continue;
    if (best == checks_.size() || checks_[j].qudits.size() < checks_[best].qudits.size()) best = j;
  }
  for (std::size_t q : checks_[best].qudits) {
    if (used[q]) continue;
    used[q] = 1;
    for (int x = 0; x < d_; ++x) {
      for (int z = 0; z < d_; ++z) {
        if (x == 0 && z == 0) continue;
        apply(residual, violated, q, x, z, +1);
        word[q] = x;
        word[n_ + q] = z;
        if (dfs(residual, violated, used, word, depth_left - 1, nodes, budget)) return true;
        apply(residual, violated, q, x, z, -1);
      }
    }
    word[q] = 0;
    word[n_ + q] = 0;
    used[q] = 0;
  }
  return false;
}

std::optional<CosetSearchResult> CosetSolver::min_weight(const std::vector<int> &target, std::size_t cap,
                                                         std::uint64_t node_budget) const {
  if (target.size() != checks_.size()) throw std::invalid_argument("target length must equal check count");
  std::uint64_t nodes = 0;
  for (std::size_t w = 0; w <= cap && w <= n_; ++w) {
    std::vector<int> residual(target.size());
    std::size_t violated = 0;
    for (std::size_t j = 0; j < target.size(); ++j) {
      residual[j] = zd::mod(target[j], d_);
      if (residual[j] != 0) ++violated;
    }
    std::vector<char> used(n_, 0);
    zd::Vec word(2 * n_, 0);
    if (dfs(residual, violated, used, word, w, nodes, node_budget)) {
      std::size_t weight = 0;
      for (std::size_t q = 0; q < n_; ++q) {
        if (word[q] != 0 || word[n_ + q] != 0) ++weight;
      }
      return CosetSearchResult{weight, std::move(word), nodes};
    }
  }
  return std::nullopt;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t count_words_of_weight(std::size_t n, int d, std::size_t w) {
  unsigned __int128 r = binomial(n, w);
  const std::uint64_t per = static_cast<std::uint64_t>(d) * d - 1;
  for (std::size_t i = 0; i < w; ++i) {
    r *= per;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

bool for_each_word_of_weight(std::size_t n, int d, std::size_t w,
                             const std::function<bool(const std::vector<std::size_t> &, const std::vector<int> &,
                                                      const std::vector<int> &)> &fn) {
  if (w > n) return true;
  std::vector<std::size_t> support(w);
  for (std::size_t i = 0; i < w; ++i) support[i] = i;
  std::vector<int> x(n, 0), z(n, 0);
  const int per = d * d - 1;
  std::vector<int> code(w, 1);
  while (true) {
    std::fill(code.begin(), code.end(), 1);
    while (true) {
      for (std::size_t i = 0; i < w; ++i) {
        x[support[i]] = code[i] / d;
        z[support[i]] = code[i] % d;
      }
      if (!fn(support, x, z)) return false;
      // Odometer over exponent codes, last site fastest.
      std::size_t i = w;
      while (i > 0) {
        --i;
        if (code[i] < per) {
          ++code[i];
          break;
        }
        code[i] = 1;
        if (i == 0) {
          i = w + 1;
          break;
        }
      }
      if (i == w + 1 || w == 0) break;
    }
    for (std::size_t i = 0; i < w; ++i) {
      x[support[i]] = 0;
      z[support[i]] = 0;
    }
    // Next combination.
    std::size_t i = w;
    while (i > 0 && support[i - 1] == n - w + (i - 1)) --i;
    if (i == 0) break;
    ++support[i - 1];
    for (std::size_t j = i; j < w; ++j) support[j] = support[j - 1] + 1;
  }
  return true;
}

}  // namespace expandlab
