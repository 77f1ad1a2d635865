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

#ifndef EXPANDLAB_IO_HPP
#define EXPANDLAB_IO_HPP

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "expandlab/bipartite_graph.hpp"
#include "expandlab/clh.hpp"
#include "expandlab/pauli.hpp"
#include "expandlab/stabilizer_code.hpp"

namespace expandlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input; `where` is a file path and/or a JSON pointer.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &where, const std::string &message)
      : std::runtime_error(where + ": " + message), where_(where) {}
  const std::string &where() const { return where_; }

 private:
  std::string where_;
};

Json load_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

Json to_json(const Rational &r);  // {"num", "den", "value"}
Rational rational_from_json(const Json &j, const std::string &where = "");

Json to_json(const dense::Mat &m);  // {"re": [[...]], "im": [[...]]}
dense::Mat matrix_from_json(const Json &re, const Json &im, const std::string &where = "");

Json to_json(const PauliOp &p);  // text form
PauliOp pauli_from_json(const Json &j, QuditSystem system, const std::string &where = "");

/// {"d", "n", "k", "generators": [[{"q", "x", "z"}, ...], ...], optional "phases"}.
/// Generators may also be given in text form ("q:0,x:1,z:0 ...").
Json to_json(const StabilizerCode &code);
StabilizerCode code_from_json(const Json &j);

/// {"m", "n", "edges": [[l, r], ...]}; "left" adjacency lists are also accepted.
Json to_json(const BipartiteGraph &g);
BipartiteGraph graph_from_json(const Json &j);

/// {"d", "n", "terms": [{"support", "matrix_re", "matrix_im"}]}
Json to_json(const CLHInstance &inst);
CLHInstance instance_from_json(const Json &j);

Json to_json(const DecompositionWitness &w);
DecompositionWitness witness_from_json(const Json &j);

}  // namespace expandlab

#endif  // EXPANDLAB_IO_HPP
