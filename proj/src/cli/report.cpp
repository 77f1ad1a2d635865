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

#include <cstdio>

#include "expandlab/cli.hpp"
#include "expandlab/seeds.hpp"

namespace expandlab::cli {

Report::Report(std::string command, Json config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed) {}

void Report::check(const std::string &name, bool passed, const std::string &detail) {
  assertions_.push_back(Json{{"name", name}, {"passed", passed}, {"detail", detail}});
}

bool Report::passed() const {
  for (const auto &a : assertions_) {
    if (!a["passed"].get<bool>()) return false;
  }
  return true;
}

Json Report::to_json() const {
  Json failures = Json::array();
  for (const auto &a : assertions_) {
    if (!a["passed"].get<bool>()) failures.push_back(a["name"]);
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "expandlab";
  j["version"] = kToolVersion;
  j["command"] = command_;
  j["config"] = config_;
  j["config_hash"] = config_hash(config_);
  j["seed"] = seed_;
  j["wall_clock_seconds"] = wall_clock_ < 0 ? Json() : Json(wall_clock_);
  j["results"] = results_;
  j["assertions"] = assertions_;
  j["failures"] = failures;
  j["passed"] = failures.empty();
  return j;
}

std::string config_hash(const Json &config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

}  // namespace expandlab::cli
