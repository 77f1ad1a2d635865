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

#include "expandlab/pauli.hpp"

#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace expandlab {

namespace {

int mod(long long a, int m) {
  long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

void require_same_system(const PauliOp &a, const PauliOp &b) {
  if (!(a.system() == b.system())) {
    throw std::invalid_argument("Pauli operands live on different qudit systems");
  }
}

}  // namespace

QuditSystem::QuditSystem(std::size_t n_, int d_) : n(n_), d(d_) {
  if (n < 1) throw std::invalid_argument("qudit system needs n >= 1");
  if (d < 2) throw std::invalid_argument("qudit system needs d >= 2");
}

bool is_prime(int d) {
  if (d < 2) return false;
  for (int f = 2; f * f <= d; ++f) {
    if (d % f == 0) return false;
  }
  return true;
}

PauliOp::PauliOp(QuditSystem system)
    : system_(system), x_(system.n, 0), z_(system.n, 0), phase_(0) {}

PauliOp::PauliOp(QuditSystem system, std::vector<int> x_exps, std::vector<int> z_exps, int phase_exp)
    : system_(system), x_(std::move(x_exps)), z_(std::move(z_exps)) {
  if (x_.size() != system_.n || z_.size() != system_.n) {
    throw std::invalid_argument("exponent vectors must have length n");
  }
  for (std::size_t q = 0; q < system_.n; ++q) {
    x_[q] = mod(x_[q], system_.d);
    z_[q] = mod(z_[q], system_.d);
  }
  phase_ = mod(phase_exp, 2 * system_.d);
}

PauliOp PauliOp::single(QuditSystem system, std::size_t q, int x, int z) {
  PauliOp p(system);
  p.set(q, x, z);
  return p;
}

std::vector<std::size_t> PauliOp::support() const {
  std::vector<std::size_t> s;
  for (std::size_t q = 0; q < system_.n; ++q) {
    if (acts_on(q)) s.push_back(q);
  }
  return s;
}

bool PauliOp::is_identity_up_to_phase() const {
  for (std::size_t q = 0; q < system_.n; ++q) {
    if (acts_on(q)) return false;
  }
  return true;
}

void PauliOp::set(std::size_t q, int x, int z) {
  if (q >= system_.n) throw std::out_of_range("qudit index out of range");
  x_[q] = mod(x, system_.d);
  z_[q] = mod(z, system_.d);
}

void PauliOp::set_phase(int phase_exp) { phase_ = mod(phase_exp, 2 * system_.d); }

std::vector<int> PauliOp::symplectic_vector() const {
  std::vector<int> v(2 * system_.n);
  for (std::size_t q = 0; q < system_.n; ++q) {
    v[q] = x_[q];
    v[system_.n + q] = z_[q];
  }
  return v;
}

bool PauliOp::equal_up_to_phase(const PauliOp &other) const {
  return system_ == other.system_ && x_ == other.x_ && z_ == other.z_;
}

PauliOp from_symplectic(QuditSystem system, const std::vector<int> &vec) {
  if (vec.size() != 2 * system.n) throw std::invalid_argument("symplectic vector has wrong length");
  std::vector<int> x(vec.begin(), vec.begin() + static_cast<std::ptrdiff_t>(system.n));
  std::vector<int> z(vec.begin() + static_cast<std::ptrdiff_t>(system.n), vec.end());
  return PauliOp(system, std::move(x), std::move(z));
}

PauliOp multiply(const PauliOp &a, const PauliOp &b) {
  require_same_system(a, b);
  const int d = a.dim();
  const std::size_t n = a.num_qudits();
  std::vector<int> x(n), z(n);
  long long phase = a.phase_exp() + b.phase_exp();
  for (std::size_t q = 0; q < n; ++q) {
    // P^z X^x = w_d^{zx} X^x P^z.
    phase += 2LL * a.z(q) * b.x(q);
    x[q] = a.x(q) + b.x(q);
    z[q] = a.z(q) + b.z(q);
  }
  return PauliOp(a.system(), std::move(x), std::move(z), mod(phase, 2 * d));
}

PauliOp inverse(const PauliOp &a) {
  // (X^x P^z)^{-1} = P^{-z} X^{-x} = w_d^{zx} X^{-x} P^{-z}.
  const int d = a.dim();
  const std::size_t n = a.num_qudits();
  std::vector<int> x(n), z(n);
  long long phase = -a.phase_exp();
  for (std::size_t q = 0; q < n; ++q) {
    phase += 2LL * a.z(q) * a.x(q);
    x[q] = -a.x(q);
    z[q] = -a.z(q);
  }
  return PauliOp(a.system(), std::move(x), std::move(z), mod(phase, 2 * d));
}

PauliOp power(const PauliOp &a, int exponent) {
  PauliOp base = exponent >= 0 ? a : inverse(a);
  int e = exponent >= 0 ? exponent : -exponent;
  PauliOp result(a.system());
  for (int i = 0; i < e; ++i) result = multiply(result, base);
  return result;
}

int symplectic_product(const PauliOp &a, const PauliOp &b) {
  require_same_system(a, b);
  long long s = 0;
  for (std::size_t q = 0; q < a.num_qudits(); ++q) {
    s += static_cast<long long>(a.x(q)) * b.z(q) - static_cast<long long>(a.z(q)) * b.x(q);
  }
  return mod(s, a.dim());
}

bool commutes(const PauliOp &a, const PauliOp &b) { return symplectic_product(a, b) == 0; }

std::size_t weight(const PauliOp &a) {
  std::size_t w = 0;
  for (std::size_t q = 0; q < a.num_qudits(); ++q) {
    if (a.acts_on(q)) ++w;
  }
  return w;
}

PauliOp restrict(const PauliOp &a, std::size_t q) {
  if (q >= a.num_qudits()) throw std::out_of_range("qudit index out of range");
  return PauliOp::single(QuditSystem(1, a.dim()), 0, a.x(q), a.z(q));
}

PauliOp restrict_complement(const PauliOp &a, std::size_t q) {
  const std::size_t n = a.num_qudits();
  if (q >= n) throw std::out_of_range("qudit index out of range");
  if (n < 2) throw std::invalid_argument("cannot drop the only qudit");
  std::vector<int> x, z;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == q) continue;
    x.push_back(a.x(i));
    z.push_back(a.z(i));
  }
  return PauliOp(QuditSystem(n - 1, a.dim()), std::move(x), std::move(z), a.phase_exp());
}

Eigen::MatrixXcd single_qudit_matrix(int d, int x, int z) {
  x = mod(x, d);
  z = mod(z, d);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    // X^x P^z |j> = w^{zj} |j+x>.
    double angle = 2.0 * std::numbers::pi * static_cast<double>((z * j) % d) / d;
    m((j + x) % d, j) = std::polar(1.0, angle);
  }
  return m;
}

Eigen::MatrixXcd to_matrix(const PauliOp &a, std::size_t max_rows) {
  const int d = a.dim();
  std::size_t rows = 1;
  for (std::size_t q = 0; q < a.num_qudits(); ++q) {
    if (rows > max_rows / static_cast<std::size_t>(d)) {
      throw std::length_error("to_matrix: d^n exceeds the configured row cap");
    }
    rows *= static_cast<std::size_t>(d);
  }
  if (rows > max_rows) throw std::length_error("to_matrix: d^n exceeds the configured row cap");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
  for (std::size_t q = 0; q < a.num_qudits(); ++q) {
    Eigen::MatrixXcd s = single_qudit_matrix(d, a.x(q), a.z(q));
    Eigen::MatrixXcd k(m.rows() * d, m.cols() * d);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        k.block(r * d, c * d, d, d) = m(r, c) * s;
      }
    }
    m = std::move(k);
  }
  const double angle = std::numbers::pi * a.phase_exp() / d;
  return std::polar(1.0, angle) * m;
}

std::string to_text(const PauliOp &a) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t q = 0; q < a.num_qudits(); ++q) {
    if (!a.acts_on(q)) continue;
    if (!first) out << ' ';
    out << "q:" << q << ",x:" << a.x(q) << ",z:" << a.z(q);
    first = false;
  }
  if (a.phase_exp() != 0) {
    if (!first) out << ' ';
    out << "phase:" << a.phase_exp();
  }
  return out.str();
}

namespace {

long long parse_int(std::string_view s, std::size_t token_index) {
  if (s.empty()) {
    throw std::invalid_argument("pauli text: empty number in token " + std::to_string(token_index));
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) {
    throw std::invalid_argument("pauli text: bad number in token " + std::to_string(token_index));
  }
  long long v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw std::invalid_argument("pauli text: bad number '" + std::string(s) + "' in token " +
                                  std::to_string(token_index));
    }
    v = v * 10 + (s[i] - '0');
    if (v > (1LL << 40)) throw std::invalid_argument("pauli text: number too large");
  }
  return neg ? -v : v;
}

}  // namespace

PauliOp parse_pauli(std::string_view text, QuditSystem system) {
  PauliOp p(system);
  std::vector<bool> seen(system.n, false);
  std::size_t pos = 0;
  std::size_t token_index = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == ';'; };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    std::string_view token = text.substr(pos, end - pos);
    pos = end;
    if (token == "I") {
      ++token_index;
      continue;
    }
    if (token.starts_with("phase:")) {
      p.set_phase(static_cast<int>(parse_int(token.substr(6), token_index) % (2 * system.d)));
      ++token_index;
      continue;
    }
    long long q = -1, x = 0, z = 0;
    bool has_q = false;
    std::size_t fpos = 0;
    while (fpos <= token.size()) {
      std::size_t comma = token.find(',', fpos);
      if (comma == std::string_view::npos) comma = token.size();
      std::string_view field = token.substr(fpos, comma - fpos);
      std::size_t colon = field.find(':');
      if (colon == std::string_view::npos) {
        throw std::invalid_argument("pauli text: expected key:value in token " + std::to_string(token_index) +
                                    " ('" + std::string(token) + "')");
      }
      std::string_view key = field.substr(0, colon);
      long long value = parse_int(field.substr(colon + 1), token_index);
      if (key == "q") {
        q = value;
        has_q = true;
      } else if (key == "x") {
        x = value;
      } else if (key == "z") {
        z = value;
      } else {
        throw std::invalid_argument("pauli text: unknown key '" + std::string(key) + "' in token " +
                                    std::to_string(token_index));
      }
      fpos = comma + 1;
    }
    if (!has_q) throw std::invalid_argument("pauli text: missing q in token " + std::to_string(token_index));
    if (q < 0 || static_cast<std::size_t>(q) >= system.n) {
      throw std::invalid_argument("pauli text: qudit index " + std::to_string(q) + " out of range in token " +
                                  std::to_string(token_index));
    }
    if (seen[static_cast<std::size_t>(q)]) {
      throw std::invalid_argument("pauli text: qudit " + std::to_string(q) + " listed twice");
    }
    seen[static_cast<std::size_t>(q)] = true;
    p.set(static_cast<std::size_t>(q), static_cast<int>(x % system.d), static_cast<int>(z % system.d));
    ++token_index;
  }
  return p;
}

}  // namespace expandlab
