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

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "expandlab/bipartite_graph.hpp"
#include "expandlab/clh.hpp"
#include "expandlab/cli.hpp"
#include "expandlab/code_zoo.hpp"
#include "expandlab/coset_search.hpp"
#include "expandlab/io.hpp"
#include "expandlab/robustness.hpp"
#include "expandlab/stabilizer_code.hpp"

namespace expandlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::string json_path;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool timing = false;
};

void add_common(CLI::App *sub, Common &c, bool seeded) {
  sub->add_option("--json", c.json_path, "Write the structured report to this path");
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  if (seeded) sub->add_option("--seed", c.seed, "Master seed");
  sub->add_flag("--timing", c.timing, "Record wall-clock time in the report (breaks byte-identical reruns)");
}

int finish(Report &rep, const Common &c, Clock::time_point start, std::ostream &out) {
  if (c.timing) rep.set_wall_clock(std::chrono::duration<double>(Clock::now() - start).count());
  const Json j = rep.to_json();
  if (!c.json_path.empty()) write_text_file(c.json_path, j.dump(2) + "\n");
  for (const auto &a : j["assertions"]) {
    out << (a["passed"].get<bool>() ? "ok   " : "FAIL ") << a["name"].get<std::string>();
    const auto detail = a["detail"].get<std::string>();
    if (!detail.empty()) out << " (" << detail << ")";
    out << "\n";
  }
  return rep.passed() ? kOk : kAssertion;
}

Json counts(const std::vector<std::size_t> &v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

std::string rational_text(const Rational &r) {
  std::ostringstream s;
  s << r.numerator();
  if (r.denominator() != 1) s << '/' << r.denominator();
  return s.str();
}

std::string join(const std::vector<std::size_t> &v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  return s.str();
}

// "0,1;2" -> {{0,1},{2}}
std::vector<std::vector<std::size_t>> parse_block_lists(const std::string &text) {
  std::vector<std::vector<std::size_t>> out;
  if (text.empty()) return out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<std::size_t> row;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      if (item.empty()) continue;
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(item, &pos);
      } catch (const std::exception &) {
        pos = 0;
      }
      if (pos != item.size()) throw ParseError("--blocks", "bad index '" + item + "'");
      row.push_back(v);
    }
    out.push_back(std::move(row));
  }
  return out;
}

struct GraphSource {
  std::string code;
  std::string graph;
};

void add_graph_source(CLI::App *sub, GraphSource &s) {
  auto *c = sub->add_option("--code", s.code, "Stabilizer code JSON");
  auto *g = sub->add_option("--graph", s.graph, "Bipartite graph JSON");
  c->excludes(g);
}

BipartiteGraph load_graph(const GraphSource &s) {
  if (!s.graph.empty()) return graph_from_json(load_json_file(s.graph));
  if (!s.code.empty()) return from_code(code_from_json(load_json_file(s.code)));
  throw ParseError("arguments", "one of --code or --graph is required");
}

Json graph_config(const GraphSource &s) { return Json{{"code", s.code}, {"graph", s.graph}}; }

Json measurement_json(const RobustnessMeasurement &m) {
  return Json{{"error", to_text(m.error)},     {"nominal_weight", m.nominal_weight},
              {"coset_weight", m.coset_weight}, {"penalty", m.penalty},
              {"max_right_degree", m.max_right_degree}, {"robustness", to_json(m.robustness)}};
}

std::vector<std::size_t> choose_U(const BipartiteGraph &g, const StabilizerCode &code, const std::string &kind,
                                  std::size_t size) {
  std::vector<std::size_t> U =
      kind == "k" ? greedy_k_independent(g, code.k(), size) : greedy_L_independent(g, size);
  U.resize(size);
  return U;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"expandlab: robustness of stabilizer codes on expander interaction graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::function<int()> action;
  const auto start = Clock::now();

  // validate
  Common c_validate;
  std::string validate_code;
  std::size_t validate_k = 0;
  auto *validate_cmd = app.add_subcommand("validate", "Validate a stabilizer code");
  validate_cmd->add_option("--code", validate_code, "Code JSON")->required();
  validate_cmd->add_option("--k", validate_k, "Locality bound (0: maximum generator weight)");
  add_common(validate_cmd, c_validate, false);
  validate_cmd->callback([&] {
    action = [&]() -> int {
      Json cfg{{"code", validate_code}, {"k", validate_k}};
      Report rep("validate", cfg, 0);
      Json j = load_json_file(validate_code);
      if (validate_k) j["k"] = validate_k;
      try {
        const StabilizerCode code = code_from_json(j);
        const BipartiteGraph g = from_code(code);
        rep.set("n", code.n());
        rep.set("d", code.d());
        rep.set("k", code.k());
        rep.set("num_generators", code.num_generators());
        rep.set("max_right_degree", code.max_right_degree());
        rep.set("right_regular", g.is_right_regular());
        rep.set("logical_qudits", code.n() - code.num_generators());
        out << "valid: n=" << code.n() << " d=" << code.d() << " k=" << code.k() << " m=" << code.num_generators()
            << " D_R=" << code.max_right_degree() << "\n";
        rep.check("code_valid", true);
      } catch (const CodeValidationError &e) {
        const auto &r = e.report();
        rep.set("failure", to_string(r.failure));
        rep.set("indices", counts(r.indices));
        out << "invalid: " << r.message << "\n";
        rep.check("code_valid", false, r.message);
      }
      return finish(rep, c_validate, start, out);
    };
  });

  // expansion
  Common c_exp;
  GraphSource exp_src;
  std::size_t exp_k = 0;
  std::uint64_t exp_samples = 1000;
  std::string exp_mode = "exact";
  bool exp_facts = false;
  auto *exp_cmd = app.add_subcommand("expansion", "Small-set expansion error of the interaction graph");
  add_graph_source(exp_cmd, exp_src);
  exp_cmd->add_option("--k", exp_k, "Largest set size (0: maximum left degree)");
  exp_cmd->add_option("--mode", exp_mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  exp_cmd->add_option("--trials", exp_samples, "Random sets to sample in sampled mode");
  exp_cmd->add_flag("--facts", exp_facts, "Also check the multi-neighbor and best-qudit facts on every set");
  add_common(exp_cmd, c_exp, true);
  exp_cmd->callback([&] {
    action = [&]() -> int {
      const BipartiteGraph g = load_graph(exp_src);
      const std::size_t k = exp_k ? exp_k : std::max<std::size_t>(1, g.max_left_degree());
      Json cfg = graph_config(exp_src);
      cfg["k"] = k;
      const bool sampled = exp_mode == "sampled";
      cfg["mode"] = exp_mode;
      if (sampled) cfg["trials"] = exp_samples;
      cfg["facts"] = exp_facts;
      Report rep("expansion", cfg, sampled ? c_exp.seed : 0);
      const auto budget = env_budget("EXPANDLAB_ENUM_BUDGET", kDefaultExpansionBudget);
      const ExpansionReport r = sampled ? expansion_error_sampled(g, k, exp_samples, c_exp.seed, c_exp.threads)
                                            : expansion_error_exact(g, k, c_exp.threads, budget);
      rep.set("eps", to_json(r.eps));
      rep.set("witness", counts(r.witness));
      rep.set("exact", r.exact);
      rep.set("sets_examined", r.sets_examined);
      rep.set("max_set_size", k);
      rep.set("max_right_degree", g.max_right_degree());
      rep.set("right_regular", r.right_regular);
      out << "eps = " << rational_text(r.eps) << " (" << boost::rational_cast<double>(r.eps) << ")"
          << (r.exact ? " exact" : " sampled lower bound") << ", witness {" << join(r.witness) << "}\n";
      if (exp_facts) {
        const FactScan s = scan_expander_facts(g, k, c_exp.threads, budget);
        rep.set("facts", Json{{"sets_checked", s.sets_checked}, {"sets_below_half", s.sets_below_half}});
        std::string cex = s.first_counterexample ? "{" + join(*s.first_counterexample) + "}" : "";
        rep.check("multi_neighbor_fraction_within_2eps", s.essence_violations == 0, cex);
        rep.check("best_qudit_fraction_within_2eps", s.degree_violations == 0, cex);
      }
      return finish(rep, c_exp, start, out);
    };
  });

  // independent-sets
  Common c_ind;
  GraphSource ind_src;
  std::string ind_kind = "L";
  std::size_t ind_k = 0, ind_target = 1;
  auto *ind_cmd = app.add_subcommand("independent-sets", "Greedy L- or k-independent constraint sets");
  add_graph_source(ind_cmd, ind_src);
  ind_cmd->add_option("--kind", ind_kind, "L or k")->check(CLI::IsMember({"L", "k"}));
  ind_cmd->add_option("--k", ind_k, "Neighborhood depth for --kind k (0: maximum left degree)");
  ind_cmd->add_option("--target", ind_target, "Required set size");
  add_common(ind_cmd, c_ind, false);
  ind_cmd->callback([&] {
    action = [&]() -> int {
      const BipartiteGraph g = load_graph(ind_src);
      const std::size_t k = ind_k ? ind_k : g.max_left_degree();
      Json cfg = graph_config(ind_src);
      cfg["kind"] = ind_kind;
      cfg["k"] = k;
      cfg["target"] = ind_target;
      Report rep("independent-sets", cfg, 0);
      rep.set("eta_stated", eta_stated(k, g.max_right_degree()));
      rep.set("eta_greedy", eta_greedy(k, g.max_right_degree()));
      try {
        const auto U = ind_kind == "L" ? greedy_L_independent(g, ind_target) : greedy_k_independent(g, k, ind_target);
        rep.set("set", counts(U));
        rep.set("size", U.size());
        const bool ok = ind_kind == "L" ? is_L_independent(g, U) : is_k_independent(g, U, k);
        out << "size " << U.size() << ": {" << join(U) << "}\n";
        rep.check("target_reached", true);
        rep.check("independent", ok);
      } catch (const TargetUnreachable &e) {
        rep.set("size", e.achieved());
        rep.check("target_reached", false, e.what());
      }
      return finish(rep, c_ind, start, out);
    };
  });

  // distance
  Common c_dist;
  std::string dist_code;
  std::size_t dist_cap = 8;
  auto *dist_cmd = app.add_subcommand("distance", "Code distance by iterative deepening up to a cap");
  dist_cmd->add_option("--code", dist_code, "Code JSON")->required();
  dist_cmd->add_option("--cap", dist_cap, "Largest weight to search");
  add_common(dist_cmd, c_dist, false);
  dist_cmd->callback([&] {
    action = [&]() -> int {
      Report rep("distance", Json{{"code", dist_code}, {"cap", dist_cap}}, 0);
      const StabilizerCode code = code_from_json(load_json_file(dist_code));
      const DistanceResult r = distance(code, dist_cap);
      if (r.distance) {
        rep.set("distance", *r.distance);
        rep.set("witness", to_text(*r.witness));
        out << "distance: " << *r.distance << "\n";
      } else {
        rep.set("distance", Json());
        rep.set("lower_bound", dist_cap + 1);
        out << "distance: >= " << dist_cap + 1 << "\n";
      }
      return finish(rep, c_dist, start, out);
    };
  });

  // robustness
  Common c_rob;
  std::string rob_code, rob_construction = "expander", rob_U_kind = "L", rob_csv;
  std::size_t rob_U_size = 1, rob_cap = 3, rob_distance_cap = 0, rob_k = 0;
  std::uint64_t rob_trials = 10000;
  auto *rob_cmd = app.add_subcommand("robustness", "Error constructions and robustness measurement");
  rob_cmd->add_option("--code", rob_code, "Code JSON")->required();
  rob_cmd->add_option("--construction", rob_construction, "expander, alphabet, random or profile")
      ->check(CLI::IsMember({"expander", "alphabet", "random", "profile"}));
  rob_cmd->add_option("--U-size", rob_U_size, "Size of the independent constraint set");
  rob_cmd->add_option("--U-kind", rob_U_kind, "L or k independence for U")->check(CLI::IsMember({"L", "k"}));
  rob_cmd->add_option("--trials", rob_trials, "Monte-Carlo trials (random)");
  rob_cmd->add_option("--k", rob_k, "Locality used for p = 1/(10k) (0: the code's)");
  rob_cmd->add_option("--cap", rob_cap, "Largest coset weight (profile)");
  rob_cmd->add_option("--csv", rob_csv, "CSV output for the profile table");
  rob_cmd->add_option("--distance-cap", rob_distance_cap, "Compute the distance up to this cap for the precondition flags");
  add_common(rob_cmd, c_rob, true);
  rob_cmd->callback([&] {
    action = [&]() -> int {
      Json cfg{{"code", rob_code}, {"construction", rob_construction}, {"U_size", rob_U_size},
               {"U_kind", rob_U_kind}, {"cap", rob_cap}, {"distance_cap", rob_distance_cap}};
      if (rob_construction == "random") {
        cfg["trials"] = rob_trials;
        cfg["k"] = rob_k;
      }
      Report rep("robustness", cfg, rob_construction == "random" ? c_rob.seed : 0);
      const StabilizerCode code = code_from_json(load_json_file(rob_code));
      const BipartiteGraph g = from_code(code);
      if (rob_construction == "profile") {
        const auto rows = robustness_profile(code, rob_cap);
        Json table = Json::array();
        for (const auto &r : rows) {
          table.push_back(Json{{"coset_weight", r.w},
                               {"min_robustness", r.min_robustness ? to_json(*r.min_robustness) : Json()},
                               {"witness", r.witness ? Json(to_text(*r.witness)) : Json()},
                               {"words", r.words}});
        }
        rep.set("profile", table);
        const std::string csv = profile_csv(rows);
        if (!rob_csv.empty()) write_text_file(rob_csv, csv);
        out << csv;
        return finish(rep, c_rob, start, out);
      }
      std::vector<std::size_t> U;
      try {
        U = choose_U(g, code, rob_U_kind, rob_U_size);
      } catch (const TargetUnreachable &e) {
        rep.check("independent_set_found", false, e.what());
        return finish(rep, c_rob, start, out);
      }
      rep.set("U", counts(U));
      if (rob_construction == "expander") {
        std::optional<std::size_t> dist;
        if (rob_distance_cap) dist = distance(code, rob_distance_cap).distance;
        const auto r = expander_adversarial_error(code, U, dist);
        rep.set("chosen_qudits", counts(r.chosen_qudits));
        rep.set("measurement", measurement_json(r.measurement));
        rep.set("eps", to_json(r.eps));
        rep.set("penalty_bound", to_json(r.penalty_bound));
        rep.set("bound_applies", r.bound_applies);
        rep.set("density_ok", r.density_ok);
        rep.set("half_distance_ok", r.half_distance_ok ? Json(*r.half_distance_ok) : Json());
        for (const auto &a : r.assertions) rep.check(a.name, a.passed, a.detail);
        out << "error " << to_text(r.measurement.error) << ": penalty " << r.measurement.penalty << ", coset weight "
            << r.measurement.coset_weight << ", robustness " << rational_text(r.measurement.robustness) << "\n";
      } else if (rob_construction == "alphabet") {
        const auto r = alphabet_error(code, U);
        rep.set("chosen_qudits", counts(r.chosen_qudits));
        rep.set("measurement", measurement_json(r.measurement));
        rep.set("penalty_bound", to_json(r.penalty_bound));
        for (const auto &a : r.assertions) rep.check(a.name, a.passed, a.detail);
        out << "error " << to_text(r.measurement.error) << ": penalty " << r.measurement.penalty << ", bound "
            << rational_text(r.penalty_bound) << "\n";
      } else {
        MonteCarloOptions mo;
        mo.trials = rob_trials;
        mo.seed = c_rob.seed;
        mo.k = rob_k;
        mo.threads = c_rob.threads;
        const auto r = monte_carlo_indexp(code, U, mo);
        Json sw = Json::object(), cw = Json::object();
        for (const auto &[w, n] : r.stabilizer_weights) sw[std::to_string(w)] = n;
        for (const auto &[w, n] : r.centralizer_weights) cw[std::to_string(w)] = n;
        rep.set("S", counts(r.S));
        rep.set("k", r.k);
        rep.set("p", r.p);
        rep.set("alpha", to_json(r.alpha));
        rep.set("eps", to_json(r.eps));
        rep.set("k_independent", r.k_independent);
        rep.set("L_independent", r.l_independent);
        rep.set("mean_penalty", r.mean_penalty);
        rep.set("half_width", r.half_width);
        rep.set("bounds", Json{{"raw", r.bounds.raw}, {"corrected", r.bounds.corrected},
                               {"final", r.bounds.final_bound}, {"final_applies", r.bounds.final_applies}});
        rep.set("y", r.y);
        rep.set("weight_threshold", r.weight_threshold);
        rep.set("computable", r.computable);
        rep.set("uncomputable", r.uncomputable);
        rep.set("above_threshold_fraction", r.above_fraction);
        rep.set("mean_weight", r.mean_weight);
        rep.set("stabilizer_weights", sw);
        rep.set("centralizer_weights", cw);
        rep.set("delta", r.delta);
        rep.set("in_delta_window", r.in_delta_window);
        rep.check("mean_penalty_within_corrected_bound", r.corrected_3ci_holds,
                  std::to_string(r.mean_penalty) + " vs " + std::to_string(r.bounds.corrected) + " + 3*" +
                      std::to_string(r.half_width));
        if (r.bounds.final_applies) rep.check("mean_penalty_within_final_bound", r.final_holds);
        rep.check("dense_oracle_agrees", r.oracle_mismatches == 0,
                  std::to_string(r.oracle_checked) + " samples checked");
        out << "mean penalty " << r.mean_penalty << " +- " << r.half_width << ", corrected bound "
            << r.bounds.corrected << ", weight >= threshold in " << r.above_fraction << " of samples\n";
      }
      return finish(rep, c_rob, start, out);
    };
  });

  // onion
  Common c_onion;
  std::string onion_code, onion_error;
  std::size_t onion_u = 0, onion_k = 0;
  auto *onion_cmd = app.add_subcommand("onion", "Restricted coset weight inside the k-th neighborhood of a generator");
  onion_cmd->add_option("--code", onion_code, "Code JSON")->required();
  onion_cmd->add_option("--u", onion_u, "Generator index")->required();
  onion_cmd->add_option("--error", onion_error, "Pauli text, e.g. \"q:0,x:0,z:1\"")->required();
  onion_cmd->add_option("--k", onion_k, "Neighborhood depth (0: the code's locality)");
  add_common(onion_cmd, c_onion, false);
  onion_cmd->callback([&] {
    action = [&]() -> int {
      Report rep("onion", Json{{"code", onion_code}, {"u", onion_u}, {"error", onion_error}, {"k", onion_k}}, 0);
      const StabilizerCode code = code_from_json(load_json_file(onion_code));
      PauliOp e(code.system());
      try {
        e = parse_pauli(onion_error, code.system());
      } catch (const std::invalid_argument &ex) {
        throw ParseError("--error", ex.what());
      }
      OnionOptions oo;
      oo.k = onion_k;
      const auto r = onion_min_restricted_weight(code, onion_u, e, oo);
      rep.set("i", r.i);
      rep.set("k", r.k);
      rep.set("region_size", r.region.size());
      rep.set("min_weight", r.min_weight);
      rep.set("bound", r.bound);
      rep.set("distance_hypothesis", r.distance_hypothesis);
      rep.set("succinct_hypothesis", r.succinct_hypothesis);
      if (r.representative) rep.set("representative", to_text(*r.representative));
      const bool hyp = r.distance_hypothesis && r.succinct_hypothesis;
      rep.check("onion_bound", r.holds || !hyp,
                std::to_string(r.min_weight) + " >= " + std::to_string(r.bound) + (hyp ? "" : " (hypotheses not met)"));
      out << "min restricted weight " << r.min_weight << " (bound " << r.bound << ")\n";
      return finish(rep, c_onion, start, out);
    };
  });

  // clh
  auto *clh_cmd = app.add_subcommand("clh", "Commuting local Hamiltonians");
  clh_cmd->require_subcommand(1);

  Common c_clhv;
  std::string clhv_in;
  auto *clhv_cmd = clh_cmd->add_subcommand("validate", "Check projector and commutation conditions");
  clhv_cmd->add_option("--in", clhv_in, "Instance JSON")->required();
  add_common(clhv_cmd, c_clhv, false);
  clhv_cmd->callback([&] {
    action = [&]() -> int {
      Report rep("clh validate", Json{{"in", clhv_in}}, 0);
      const CLHInstance inst = instance_from_json(load_json_file(clhv_in));
      const auto v = validate_clh(inst);
      rep.set("max_projector_error", v.max_projector_error);
      rep.set("max_hermiticity_error", v.max_hermiticity_error);
      rep.set("max_commutator", v.max_commutator);
      Json issues = Json::array();
      for (const auto &s : v.issues) issues.push_back(s);
      rep.set("issues", issues);
      rep.check("instance_valid", v.valid, v.issues.empty() ? "" : v.issues.front());
      return finish(rep, c_clhv, start, out);
    };
  });

  Common c_approx;
  std::string approx_in, approx_out, approx_strategy = "exhaustive", approx_blocks, approx_levels;
  std::uint64_t approx_leaf_budget = 100000;
  auto *approx_cmd = clh_cmd->add_subcommand("approx", "Isolate, split and prune until the terms are disjoint");
  approx_cmd->add_option("--in", approx_in, "Instance JSON")->required();
  approx_cmd->add_option("--out", approx_out, "Witness JSON output");
  approx_cmd->add_option("--strategy", approx_strategy, "prover or exhaustive")
      ->check(CLI::IsMember({"prover", "exhaustive"}));
  approx_cmd->add_option("--blocks", approx_blocks, "Prover block indices, e.g. \"0,1;0\" (one group per iteration)");
  approx_cmd->add_option("--levels", approx_levels, "Eigen level per good term, e.g. \"0,0,1\"");
  approx_cmd->add_option("--leaf-budget", approx_leaf_budget, "Leaves explored by the exhaustive search");
  add_common(approx_cmd, c_approx, true);
  approx_cmd->callback([&] {
    action = [&]() -> int {
      Json cfg{{"in", approx_in}, {"strategy", approx_strategy}, {"blocks", approx_blocks},
               {"levels", approx_levels}, {"leaf_budget", approx_leaf_budget}};
      Report rep("clh approx", cfg, c_approx.seed);
      const CLHInstance inst = instance_from_json(load_json_file(approx_in));
      ApproxOptions ao;
      ao.strategy = approx_strategy == "prover" ? BlockStrategy::prover_indices : BlockStrategy::exhaustive;
      ao.prover_blocks = parse_block_lists(approx_blocks);
      auto lv = parse_block_lists(approx_levels);
      if (!lv.empty()) ao.levels = lv.front();
      ao.leaf_budget = approx_leaf_budget;
      ao.seed = c_approx.seed;
      const ApproxResult r = approximate_ground(inst, ao);
      if (!approx_out.empty()) write_text_file(approx_out, to_json(r.witness).dump(2) + "\n");
      rep.set("energy", r.energy);
      rep.set("predicted_energy", r.predicted_energy);
      rep.set("iterations", r.iterations);
      rep.set("num_terms", r.num_terms);
      rep.set("bad_count", r.bad_count);
      rep.set("bad_terms", counts(r.witness.bad_terms));
      rep.set("locality", r.locality);
      rep.set("eps", to_json(r.eps));
      rep.set("bad_bound", r.bad_bound);
      rep.set("amortized_holds", r.amortized_holds);
      rep.set("search_exhausted", r.search_exhausted);
      rep.set("leaves", r.leaves);
      rep.set("max_reconstruction_error", r.max_reconstruction_error);
      rep.set("max_commutation_error", r.max_commutation_error);
      rep.check("iterations_within_term_count", r.iterations <= r.num_terms);
      rep.check("bad_terms_within_2kd_eps_L", r.bad_bound_holds,
                std::to_string(r.bad_count) + " <= " + std::to_string(r.bad_bound));
      rep.check("reconstruction_within_tolerance", r.max_reconstruction_error <= 1e-8 && r.max_commutation_error <= 1e-8);
      double qubits = 0;
      for (std::size_t i = 0; i < inst.n; ++i) qubits += std::log2(static_cast<double>(inst.d));
      if (qubits <= 12.0) {
        const double ground = exact_ground_energy(inst);
        rep.set("exact_ground_energy", ground);
        rep.check("energy_within_bad_slack",
                  r.energy >= ground - 1e-8 && r.energy <= ground + static_cast<double>(r.bad_count) + 1e-8);
      }
      out << "energy " << r.energy << " after " << r.iterations << " iterations, " << r.bad_count << " bad terms\n";
      return finish(rep, c_approx, start, out);
    };
  });

  Common c_verify;
  std::string verify_in, verify_witness_path;
  auto *verify_cmd = clh_cmd->add_subcommand("verify", "Replay a witness and evaluate its energy");
  verify_cmd->add_option("--in", verify_in, "Instance JSON")->required();
  verify_cmd->add_option("--witness", verify_witness_path, "Witness JSON")->required();
  add_common(verify_cmd, c_verify, false);
  verify_cmd->callback([&] {
    action = [&]() -> int {
      Report rep("clh verify", Json{{"in", verify_in}, {"witness", verify_witness_path}}, 0);
      const CLHInstance inst = instance_from_json(load_json_file(verify_in));
      const DecompositionWitness w = witness_from_json(load_json_file(verify_witness_path));
      const VerifyReport v = verify_witness(inst, w);
      rep.set("energy", v.energy);
      rep.set("good_energy", v.good_energy);
      rep.set("bad_count", v.bad_count);
      rep.set("max_isometry_error", v.max_isometry_error);
      rep.set("max_invariance_error", v.max_invariance_error);
      Json issues = Json::array();
      for (const auto &s : v.issues) issues.push_back(s);
      rep.set("issues", issues);
      rep.check("witness_replays", v.ok, v.issues.empty() ? "" : v.issues.front());
      rep.check("energy_within_good_plus_bad", v.energy_bound_holds);
      rep.check("claimed_energy_matches", v.claimed_energy_matches);
      out << "energy " << v.energy << ", good-term energy " << v.good_energy << ", bad terms " << v.bad_count << "\n";
      return finish(rep, c_verify, start, out);
    };
  });

  // zoo
  auto *zoo_cmd = app.add_subcommand("zoo", "Build test subjects");
  zoo_cmd->require_subcommand(1);
  auto emit = [&](const std::string &path, const Json &j) {
    if (path.empty()) {
      out << j.dump(2) << "\n";
    } else {
      write_text_file(path, j.dump(2) + "\n");
    }
  };

  std::size_t toric_L = 3;
  std::string toric_out;
  auto *toric_cmd = zoo_cmd->add_subcommand("toric", "Toric code on an L x L torus");
  toric_cmd->add_option("--L", toric_L, "Lattice size")->check(CLI::Range(2, 64));
  toric_cmd->add_option("--out", toric_out, "Code JSON output");
  toric_cmd->callback([&] {
    action = [&]() -> int {
      emit(toric_out, to_json(toric_code(toric_L)));
      return kOk;
    };
  });

  std::size_t chain_L = 5, chain_ell = 1, chain_spacing = 2, chain_count = 1;
  Common c_chain;
  auto *chain_cmd = zoo_cmd->add_subcommand("chain", "Staircase Z chains on the toric code and their robustness");
  chain_cmd->add_option("--L", chain_L, "Lattice size")->check(CLI::Range(2, 64));
  chain_cmd->add_option("--ell", chain_ell, "Chain length");
  chain_cmd->add_option("--spacing", chain_spacing, "Separation between chains");
  chain_cmd->add_option("--count", chain_count, "Number of chains");
  add_common(chain_cmd, c_chain, false);
  chain_cmd->callback([&] {
    action = [&]() -> int {
      Report rep("zoo chain", Json{{"L", chain_L}, {"ell", chain_ell}, {"spacing", chain_spacing}, {"count", chain_count}}, 0);
      const StabilizerCode code = toric_code(chain_L);
      const PauliOp e = scattered_chains(chain_L, chain_ell, chain_spacing, chain_count);
      const auto m = measure_robustness(code, e);
      rep.set("measurement", measurement_json(m));
      rep.set("syndrome_size", m.penalty);
      out << "chain " << to_text(e) << ": penalty " << m.penalty << ", coset weight " << m.coset_weight
          << ", robustness " << rational_text(m.robustness) << "\n";
      return finish(rep, c_chain, start, out);
    };
  });

  Common c_classical;
  std::string classical_graph;
  std::size_t classical_max_weight = 3;
  bool classical_check = false;
  auto *classical_cmd = zoo_cmd->add_subcommand("classical", "Classical parity-check code of a bipartite graph");
  classical_cmd->add_option("--graph", classical_graph, "Graph JSON")->required();
  classical_cmd->add_flag("--check", classical_check, "Exhaustively check the (1 - 3 eps) robustness bound");
  classical_cmd->add_option("--max-weight", classical_max_weight, "Largest error set size");
  add_common(classical_cmd, c_classical, false);
  classical_cmd->callback([&] {
    action = [&]() -> int {
      Report rep("zoo classical", Json{{"graph", classical_graph}, {"check", classical_check}, {"max_weight", classical_max_weight}}, 0);
      const auto code = classical_parity_code(graph_from_json(load_json_file(classical_graph)));
      rep.set("m", code.graph.m());
      rep.set("n", code.graph.n());
      rep.set("max_right_degree", code.graph.max_right_degree());
      if (classical_check) {
        const auto r = classical_robustness_check(code, classical_max_weight, c_classical.threads);
        rep.set("eps", to_json(r.eps));
        rep.set("sets_checked", r.sets_checked);
        rep.set("right_regular", r.right_regular);
        rep.set("average_left_degree", to_json(r.average_left_degree));
        rep.check("violations_at_least_S_DR_1_minus_3eps", r.bound_failures == 0,
                  r.bound_counterexample ? "{" + join(*r.bound_counterexample) + "}" : "");
        rep.check("low_weight_words_rejected", r.distance_failures == 0,
                  r.distance_counterexample ? "{" + join(*r.distance_counterexample) + "}" : "");
        out << "eps = " << rational_text(r.eps) << ", " << r.sets_checked << " sets checked\n";
      }
      return finish(rep, c_classical, start, out);
    };
  });

  RandomCssOptions css;
  std::uint64_t css_seed = 1;
  std::string css_out;
  auto *css_cmd = zoo_cmd->add_subcommand("random-css", "Random CSS code");
  css_cmd->add_option("--n", css.n, "Qubits");
  css_cmd->add_option("--k", css.k, "Generator weight");
  css_cmd->add_option("--dr", css.right_degree, "Maximum right degree");
  css_cmd->add_option("--min-distance", css.min_distance, "Reject codes with smaller distance");
  css_cmd->add_option("--seed", css_seed, "Seed");
  css_cmd->add_option("--out", css_out, "Code JSON output");
  css_cmd->callback([&] {
    action = [&]() -> int {
      emit(css_out, to_json(random_css_instance(css, css_seed)));
      return kOk;
    };
  });

  std::string zclh_code, zclh_out;
  auto *zclh_cmd = zoo_cmd->add_subcommand("clh", "Projector Hamiltonian of a stabilizer code");
  zclh_cmd->add_option("--code", zclh_code, "Code JSON")->required();
  zclh_cmd->add_option("--out", zclh_out, "Instance JSON output");
  zclh_cmd->callback([&] {
    action = [&]() -> int {
      emit(zclh_out, to_json(as_projector_clh(code_from_json(load_json_file(zclh_code)))));
      return kOk;
    };
  });

  std::size_t rg_m = 12, rg_n = 24, rg_deg = 4;
  std::uint64_t rg_seed = 1;
  std::string rg_out;
  auto *rg_cmd = zoo_cmd->add_subcommand("random-graph", "Random left-regular bipartite graph");
  rg_cmd->add_option("--m", rg_m, "Left vertices");
  rg_cmd->add_option("--n", rg_n, "Right vertices");
  rg_cmd->add_option("--left-degree", rg_deg, "Left degree");
  rg_cmd->add_option("--seed", rg_seed, "Seed");
  rg_cmd->add_option("--out", rg_out, "Graph JSON output");
  rg_cmd->callback([&] {
    action = [&]() -> int {
      emit(rg_out, to_json(random_left_regular_graph(rg_m, rg_n, rg_deg, rg_seed)));
      return kOk;
    };
  });

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  if (!action) {
    err << "no command selected\n";
    return kUsage;
  }
  try {
    return action();
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded &e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const CodeValidationError &e) {
    err << "invalid code: " << e.what() << "\n";
    return kAssertion;
  } catch (const PreconditionError &e) {
    err << "precondition violated: " << e.what() << "\n";
    return kAssertion;
  } catch (const std::invalid_argument &e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range &e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kAssertion;
  }
}

}  // namespace expandlab::cli
