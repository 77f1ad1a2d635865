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

#ifndef EXPANDLAB_CLI_HPP
#define EXPANDLAB_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "expandlab/io.hpp"

namespace expandlab::cli {

inline constexpr const char *kToolVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,      // parse or usage error
  kAssertion = 2,  // a requested assertion failed
  kBudget = 3,     // enumeration or search budget exhausted
};

/// Structured report shared by every subcommand.
class Report {
 public:
  Report(std::string command, Json config, std::uint64_t seed);

  void set(const std::string &key, Json value) { results_[key] = std::move(value); }
  void check(const std::string &name, bool passed, const std::string &detail = "");
  bool passed() const;
  void set_wall_clock(double seconds) { wall_clock_ = seconds; }

  Json to_json() const;

 private:
  std::string command_;
  Json config_;
  std::uint64_t seed_;
  Json results_ = Json::object();
  Json assertions_ = Json::array();
  double wall_clock_ = -1.0;
};

/// FNV-1a over the compact serialization of the config, as 16 hex digits.
std::string config_hash(const Json &config);

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace expandlab::cli

#endif  // EXPANDLAB_CLI_HPP
