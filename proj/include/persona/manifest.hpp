// Copyright 2026 The Persona Authors.
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

#ifndef PERSONA_MANIFEST_HPP_
#define PERSONA_MANIFEST_HPP_

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persona/json_io.hpp"

namespace persona {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Record of one artifact-producing command, enough to rerun it.
struct RunManifest {
  std::string command;
  Json config = Json::object();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dataset_hash;
  std::vector<std::string> outputs;
  std::map<std::string, int> counts;
  std::string started_at = utc_timestamp();
  std::string finished_at;

  std::string config_hash() const { return hex64(fnv1a64(config.dump())); }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["config"] = config;
    j["config_hash"] = config_hash();
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["dataset_hash"] = dataset_hash ? Json(*dataset_hash) : Json(nullptr);
    j["outputs"] = outputs;
    j["counts"] = counts;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at.empty() ? utc_timestamp() : finished_at;
    return j;
  }

  void write(const std::filesystem::path& path) const { write_file(path, to_json().dump(2) + "\n"); }
};

}  // namespace persona

#endif  // PERSONA_MANIFEST_HPP_
