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

#include "expandlab/io.hpp"

#include <fstream>
#include <sstream>

namespace expandlab {

namespace {

const Json &field(const Json &j, const char *key, const std::string &where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "/" + key, "missing field");
  return *it;
}

std::size_t as_count(const Json &j, const std::string &where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

int as_int(const Json &j, const std::string &where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<int>();
}

double as_double(const Json &j, const std::string &where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  return j.get<double>();
}

std::vector<std::size_t> as_counts(const Json &j, const std::string &where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_count(j[i], where + "/" + std::to_string(i)));
  return out;
}

std::size_t count_field(const Json &j, const char *key, const std::string &where) {
  return as_count(field(j, key, where), where + "/" + key);
}

Json counts_json(const std::vector<std::size_t> &v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

Json part_json(const dense::Mat &m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(path + " (byte " + std::to_string(e.byte) + ")", e.what());
  }
}

void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Json to_json(const Rational &r) {
  return Json{{"num", r.numerator()}, {"den", r.denominator()}, {"value", boost::rational_cast<double>(r)}};
}

Rational rational_from_json(const Json &j, const std::string &where) {
  const Json &num = field(j, "num", where);
  const Json &den = field(j, "den", where);
  if (!num.is_number_integer() || !den.is_number_integer() || den.get<std::int64_t>() == 0) {
    throw ParseError(where, "rational needs integer num and non-zero den");
  }
  return Rational(num.get<std::int64_t>(), den.get<std::int64_t>());
}

Json to_json(const dense::Mat &m) { return Json{{"re", part_json(m, false)}, {"im", part_json(m, true)}}; }

dense::Mat matrix_from_json(const Json &re, const Json &im, const std::string &where) {
  if (!re.is_array()) throw ParseError(where, "matrix real part must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const bool has_im = !im.is_null();
  if (has_im && (!im.is_array() || im.size() != re.size())) throw ParseError(where, "imaginary part shape mismatch");
  Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(re[0].is_array() ? re[0].size() : 0);
  dense::Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rw = where + "/" + std::to_string(r);
    const Json &row = re[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError(rw, "ragged matrix row");
    const Json *irow = has_im ? &im[static_cast<std::size_t>(r)] : nullptr;
    if (irow && (!irow->is_array() || static_cast<Eigen::Index>(irow->size()) != cols)) {
      throw ParseError(rw, "ragged imaginary row");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double a = as_double(row[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
      const double b = irow ? as_double((*irow)[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c)) : 0.0;
      m(r, c) = {a, b};
    }
  }
  return m;
}

Json to_json(const PauliOp &p) { return to_text(p); }

PauliOp pauli_from_json(const Json &j, QuditSystem system, const std::string &where) {
  if (j.is_string()) {
    try {
      return parse_pauli(j.get<std::string>(), system);
    } catch (const std::invalid_argument &e) {
      throw ParseError(where, e.what());
    }
  }
  if (j.is_array()) {
    PauliOp p(system);
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string w = where + "/" + std::to_string(i);
      const std::size_t q = count_field(j[i], "q", w);
      if (q >= system.n) throw ParseError(w + "/q", "qudit index out of range");
      if (p.acts_on(q)) throw ParseError(w + "/q", "qudit listed twice");
      p.set(q, as_int(field(j[i], "x", w), w + "/x"), as_int(field(j[i], "z", w), w + "/z"));
    }
    return p;
  }
  if (j.is_object()) {
    auto xs = field(j, "x", where), zs = field(j, "z", where);
    if (!xs.is_array() || !zs.is_array() || xs.size() != system.n || zs.size() != system.n) {
      throw ParseError(where, "x and z must be arrays of length n");
    }
    std::vector<int> x, z;
    for (std::size_t q = 0; q < system.n; ++q) {
      x.push_back(as_int(xs[q], where + "/x/" + std::to_string(q)));
      z.push_back(as_int(zs[q], where + "/z/" + std::to_string(q)));
    }
    int phase = j.contains("phase") ? as_int(j["phase"], where + "/phase") : 0;
    return PauliOp(system, x, z, phase);
  }
  throw ParseError(where, "expected a Pauli string or an {x, z} object");
}

Json to_json(const StabilizerCode &code) {
  Json gens = Json::array();
  Json phases = Json::array();
  bool any_phase = false;
  for (const auto &g : code.generators()) {
    Json sites = Json::array();
    for (auto q : g.support()) sites.push_back(Json{{"q", q}, {"x", g.x(q)}, {"z", g.z(q)}});
    gens.push_back(std::move(sites));
    phases.push_back(g.phase_exp());
    any_phase = any_phase || g.phase_exp() != 0;
  }
  Json j{{"d", code.d()}, {"n", code.n()}, {"k", code.k()}, {"generators", gens}};
  if (any_phase) j["phases"] = phases;
  return j;
}

StabilizerCode code_from_json(const Json &j) {
  const std::size_t n = count_field(j, "n", "");
  const int d = as_int(field(j, "d", ""), "/d");
  const std::size_t k = j.contains("k") ? count_field(j, "k", "") : 0;
  QuditSystem sys;
  try {
    sys = QuditSystem(n, d);
  } catch (const std::invalid_argument &e) {
    throw ParseError("/n", e.what());
  }
  const Json &gens = field(j, "generators", "");
  if (!gens.is_array()) throw ParseError("/generators", "expected an array");
  std::vector<PauliOp> ops;
  for (std::size_t i = 0; i < gens.size(); ++i) ops.push_back(pauli_from_json(gens[i], sys, "/generators/" + std::to_string(i)));
  if (j.contains("phases")) {
    const Json &ph = j["phases"];
    if (!ph.is_array() || ph.size() != ops.size()) throw ParseError("/phases", "expected one phase per generator");
    for (std::size_t i = 0; i < ops.size(); ++i) ops[i].set_phase(as_int(ph[i], "/phases/" + std::to_string(i)));
  }
  return validate(ops, k);
}

Json to_json(const BipartiteGraph &g) {
  Json edges = Json::array();
  for (const auto &[l, r] : g.edges()) edges.push_back(Json::array({l, r}));
  return Json{{"m", g.m()}, {"n", g.n()}, {"edges", edges}};
}

BipartiteGraph graph_from_json(const Json &j) {
  const std::size_t m = count_field(j, "m", "");
  const std::size_t n = count_field(j, "n", "");
  if (j.contains("edges")) {
    const Json &edges = j["edges"];
    if (!edges.is_array()) throw ParseError("/edges", "expected an array of [l, r] pairs");
    std::vector<std::pair<std::size_t, std::size_t>> list;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto pair = as_counts(edges[i], "/edges/" + std::to_string(i));
      if (pair.size() != 2) throw ParseError("/edges/" + std::to_string(i), "expected [l, r]");
      if (pair[0] >= m || pair[1] >= n) throw ParseError("/edges/" + std::to_string(i), "vertex out of range");
      list.emplace_back(pair[0], pair[1]);
    }
    try {
      return BipartiteGraph::from_edges(m, n, list);
    } catch (const std::invalid_argument &e) {
      throw ParseError("/edges", e.what());
    }
  }
  const Json &left = field(j, "left", "");
  if (!left.is_array() || left.size() != m) throw ParseError("/left", "expected m adjacency lists");
  std::vector<std::vector<std::size_t>> adj;
  for (std::size_t l = 0; l < m; ++l) adj.push_back(as_counts(left[l], "/left/" + std::to_string(l)));
  try {
    return BipartiteGraph(m, n, std::move(adj));
  } catch (const std::invalid_argument &e) {
    throw ParseError("/left", e.what());
  }
}

Json to_json(const CLHInstance &inst) {
  Json terms = Json::array();
  for (const auto &t : inst.terms) {
    terms.push_back(Json{{"support", counts_json(t.support)},
                         {"matrix_re", part_json(t.matrix, false)},
                         {"matrix_im", part_json(t.matrix, true)}});
  }
  return Json{{"d", inst.d}, {"n", inst.n}, {"terms", terms}};
}

CLHInstance instance_from_json(const Json &j) {
  CLHInstance inst;
  inst.d = as_int(field(j, "d", ""), "/d");
  if (inst.d < 2) throw ParseError("/d", "local dimension must be at least 2");
  inst.n = count_field(j, "n", "");
  const Json &terms = field(j, "terms", "");
  if (!terms.is_array()) throw ParseError("/terms", "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = "/terms/" + std::to_string(i);
    ClhTerm t;
    t.support = as_counts(field(terms[i], "support", w), w + "/support");
    const Json im = terms[i].contains("matrix_im") ? terms[i]["matrix_im"] : Json();
    t.matrix = matrix_from_json(field(terms[i], "matrix_re", w), im, w + "/matrix_re");
    std::size_t expect = 1;
    for (auto q : t.support) {
      if (q >= inst.n) throw ParseError(w + "/support", "qudit index out of range");
      expect *= static_cast<std::size_t>(inst.d);
    }
    if (static_cast<std::size_t>(t.matrix.rows()) != expect || static_cast<std::size_t>(t.matrix.cols()) != expect) {
      throw ParseError(w + "/matrix_re", "matrix must be d^|support| square");
    }
    inst.terms.push_back(std::move(t));
  }
  return inst;
}

Json to_json(const DecompositionWitness &w) {
  Json its = Json::array();
  for (const auto &r : w.iterations) {
    Json decs = Json::array();
    for (const auto &d : r.decompositions) {
      Json blocks = Json::array();
      for (const auto &b : d.blocks) {
        blocks.push_back(Json{{"left_dim", b.left_dim}, {"right_dim", b.right_dim}, {"isometry", to_json(b.isometry)}});
      }
      decs.push_back(Json{{"site", d.site}, {"dim", d.dim}, {"reconstruction_error", d.reconstruction_error},
                          {"blocks", blocks}});
    }
    Json pv = Json::array();
    for (double v : r.pruned_values) pv.push_back(v);
    its.push_back(Json{{"chosen", r.chosen},
                       {"removed", counts_json(r.removed)},
                       {"decompositions", decs},
                       {"chosen_blocks", counts_json(r.chosen_blocks)},
                       {"pruned_terms", counts_json(r.pruned_terms)},
                       {"pruned_values", pv},
                       {"dimension_removed", r.dimension_removed},
                       {"reconstruction_error", r.reconstruction_error},
                       {"commutation_error", r.commutation_error}});
  }
  return Json{{"iterations", its},
              {"good_terms", counts_json(w.good_terms)},
              {"good_levels", counts_json(w.good_levels)},
              {"bad_terms", counts_json(w.bad_terms)},
              {"claimed_energy", w.claimed_energy}};
}

DecompositionWitness witness_from_json(const Json &j) {
  DecompositionWitness w;
  const Json &its = field(j, "iterations", "");
  if (!its.is_array()) throw ParseError("/iterations", "expected an array");
  for (std::size_t i = 0; i < its.size(); ++i) {
    const std::string p = "/iterations/" + std::to_string(i);
    const Json &it = its[i];
    IterationRecord r;
    r.chosen = count_field(it, "chosen", p);
    r.removed = as_counts(field(it, "removed", p), p + "/removed");
    r.chosen_blocks = as_counts(field(it, "chosen_blocks", p), p + "/chosen_blocks");
    if (it.contains("pruned_terms")) r.pruned_terms = as_counts(it["pruned_terms"], p + "/pruned_terms");
    if (it.contains("pruned_values")) {
      for (std::size_t v = 0; v < it["pruned_values"].size(); ++v) {
        r.pruned_values.push_back(as_double(it["pruned_values"][v], p + "/pruned_values"));
      }
    }
    if (it.contains("dimension_removed")) r.dimension_removed = count_field(it, "dimension_removed", p);
    if (it.contains("reconstruction_error")) r.reconstruction_error = as_double(it["reconstruction_error"], p);
    if (it.contains("commutation_error")) r.commutation_error = as_double(it["commutation_error"], p);
    const Json &decs = field(it, "decompositions", p);
    if (!decs.is_array()) throw ParseError(p + "/decompositions", "expected an array");
    for (std::size_t di = 0; di < decs.size(); ++di) {
      const std::string dp = p + "/decompositions/" + std::to_string(di);
      QuditDecomposition d;
      d.site = count_field(decs[di], "site", dp);
      d.dim = as_int(field(decs[di], "dim", dp), dp + "/dim");
      if (decs[di].contains("reconstruction_error")) d.reconstruction_error = as_double(decs[di]["reconstruction_error"], dp);
      const Json &blocks = field(decs[di], "blocks", dp);
      if (!blocks.is_array()) throw ParseError(dp + "/blocks", "expected an array");
      for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const std::string bp = dp + "/blocks/" + std::to_string(bi);
        SplitBlock b;
        b.left_dim = as_int(field(blocks[bi], "left_dim", bp), bp + "/left_dim");
        b.right_dim = as_int(field(blocks[bi], "right_dim", bp), bp + "/right_dim");
        const Json &iso = field(blocks[bi], "isometry", bp);
        b.isometry = matrix_from_json(field(iso, "re", bp + "/isometry"), iso.contains("im") ? iso["im"] : Json(),
                                      bp + "/isometry");
        d.blocks.push_back(std::move(b));
      }
      r.decompositions.push_back(std::move(d));
    }
    w.iterations.push_back(std::move(r));
  }
  w.good_terms = as_counts(field(j, "good_terms", ""), "/good_terms");
  if (j.contains("good_levels")) w.good_levels = as_counts(j["good_levels"], "/good_levels");
  w.bad_terms = as_counts(field(j, "bad_terms", ""), "/bad_terms");
  w.claimed_energy = as_double(field(j, "claimed_energy", ""), "/claimed_energy");
  return w;
}

}  // namespace expandlab
