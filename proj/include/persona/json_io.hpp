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

// JSON encodings: persona-trace/v1 trace files, belief dumps, learned
// parameters, and dataset loading.

#ifndef PERSONA_JSON_IO_HPP_
#define PERSONA_JSON_IO_HPP_

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "persona/argumentation.hpp"
#include "persona/belief.hpp"
#include "persona/error.hpp"
#include "persona/personalization.hpp"

namespace persona {

using Json = nlohmann::ordered_json;

inline constexpr const char* kTraceSchema = "persona-trace/v1";

// `value` rounded to `digits` significant digits.
inline double round_significant(double value, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Hash of the exact bit patterns of a belief's probabilities.
inline std::string belief_digest(const BeliefState& b) {
  const auto probs = b.probs();
  std::string bytes(probs.size() * sizeof(double), '\0');
  std::memcpy(bytes.data(), probs.data(), bytes.size());
  return hex64(fnv1a64(bytes));
}

inline Json belief_to_json(const BeliefState& b) {
  Json j;
  j["atoms"] = b.language().atoms();
  Json probs = Json::array();
  for (double p : b.probs()) probs.push_back(round_significant(p));
  j["probs"] = std::move(probs);
  j["timestep"] = b.timestep();
  if (b.warning()) j["warning"] = "empty_block";
  return j;
}

inline Json params_to_json(const WeightingParams& p) { return Json{{"s", p.s()}, {"r", p.r()}}; }

inline Json learned_to_json(const LearnedParams& lp) {
  Json j;
  j["participant"] = lp.participant;
  j["k"] = lp.k;
  j["s"] = lp.params.s();
  j["r"] = lp.params.r();
  j["objective"] = lp.objective;
  Json maxes = Json::array();
  for (const auto& m : lp.maximizers) maxes.push_back(params_to_json(m));
  j["maximizers"] = std::move(maxes);
  j["rounds_used"] = lp.rounds_used;
  j["rounds_skipped"] = lp.rounds_skipped;
  j["undefined_correlations"] = lp.undefined_correlations;
  return j;
}

namespace internal {

template <typename J>
const J& Require(const J& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError("missing_field", std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace internal

template <typename J>
RawTrace raw_trace_from_json(const J& j) {
  using internal::Require;
  try {
    if (j.contains("schema") && j.at("schema").template get<std::string>() != kTraceSchema) {
      throw ValidationError("unsupported_schema", "unsupported trace schema '" +
                                                      j.at("schema").template get<std::string>() + "'");
    }
    RawTrace raw;
    raw.participant = Require(j, "participant").template get<std::string>();
    raw.atoms = Require(j, "atoms").template get<std::vector<std::string>>();
    for (const auto& a : Require(j, "argument_pool")) {
      raw.argument_pool.push_back({Require(a, "id").template get<std::string>(),
                                   Require(a, "premises").template get<std::vector<std::string>>(),
                                   Require(a, "claim").template get<std::string>()});
    }
    for (const auto& e : Require(j, "events")) {
      RawEvent re;
      re.t = Require(e, "t").template get<int>();
      re.speaker = Require(e, "speaker").template get<std::string>();
      re.argument = Require(e, "argument").template get<std::string>();
      if (e.contains("confidence") && !e.at("confidence").is_null()) {
        re.confidence = e.at("confidence").template get<double>();
      }
      if (e.contains("attacks") && !e.at("attacks").is_null()) {
        re.attacks = e.at("attacks").template get<std::string>();
      }
      if (e.contains("weighting") && !e.at("weighting").is_null()) {
        const auto& w = e.at("weighting");
        re.weighting = std::make_pair(Require(w, "s").template get<double>(),
                                      Require(w, "r").template get<double>());
      }
      raw.events.push_back(std::move(re));
    }
    for (const auto& c : Require(j, "candidate_models")) {
      raw.candidate_models.push_back({Require(c, "id").template get<std::string>(),
                                      Require(c, "formula").template get<std::string>(),
                                      c.value("text", std::string())});
    }
    if (j.contains("model_rankings")) {
      for (const auto& r : j.at("model_rankings")) {
        raw.model_rankings.push_back({Require(r, "round").template get<int>(),
                                      Require(r, "order").template get<std::vector<std::string>>()});
      }
    }
    if (j.contains("final_argument_ranking")) {
      raw.final_argument_ranking = j.at("final_argument_ranking").template get<std::vector<std::string>>();
    }
    if (j.contains("metadata")) {
      for (const auto& [k, v] : j.at("metadata").items()) {
        raw.metadata[k] = v.is_string() ? v.template get<std::string>() : v.dump();
      }
    }
    return raw;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("invalid_json", std::string("malformed trace: ") + ex.what());
  }
}

inline Json raw_trace_to_json(const RawTrace& raw) {
  Json j;
  j["schema"] = kTraceSchema;
  j["participant"] = raw.participant;
  j["atoms"] = raw.atoms;
  Json pool = Json::array();
  for (const auto& a : raw.argument_pool) {
    pool.push_back(Json{{"id", a.id}, {"premises", a.premises}, {"claim", a.claim}});
  }
  j["argument_pool"] = std::move(pool);
  Json events = Json::array();
  for (const auto& e : raw.events) {
    Json je;
    je["t"] = e.t;
    je["speaker"] = e.speaker;
    je["argument"] = e.argument;
    je["confidence"] = e.confidence ? Json(*e.confidence) : Json(nullptr);
    je["attacks"] = e.attacks ? Json(*e.attacks) : Json(nullptr);
    if (e.weighting) je["weighting"] = Json{{"s", e.weighting->first}, {"r", e.weighting->second}};
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);
  Json cands = Json::array();
  for (const auto& c : raw.candidate_models) {
    Json jc{{"id", c.id}, {"formula", c.formula}};
    if (!c.text.empty()) jc["text"] = c.text;
    cands.push_back(std::move(jc));
  }
  j["candidate_models"] = std::move(cands);
  Json rankings = Json::array();
  for (const auto& r : raw.model_rankings) rankings.push_back(Json{{"round", r.round}, {"order", r.order}});
  j["model_rankings"] = std::move(rankings);
  j["final_argument_ranking"] = raw.final_argument_ranking;
  if (!raw.metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : raw.metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
  }
  return j;
}

inline Json trace_to_json(const DialogueTrace& trace) { return raw_trace_to_json(to_raw(trace)); }

inline DialogueTrace trace_from_json(const Json& j, const TraceLimits& limits = {}) {
  return validate_trace(raw_trace_from_json(j), limits);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("file_not_found", "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  out << contents;
}

inline Json parse_json(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("invalid_json", origin + ": " + ex.what());
  }
}

inline DialogueTrace read_trace_file(const std::filesystem::path& path, const TraceLimits& limits = {}) {
  return trace_from_json(parse_json(read_file(path), path.string()), limits);
}

inline void write_trace_file(const std::filesystem::path& path, const DialogueTrace& trace) {
  write_file(path, trace_to_json(trace).dump(2) + "\n");
}

struct Dataset {
  std::vector<DialogueTrace> traces;
  std::string hash;  // FNV-1a over the files' bytes in load order
};

// A directory of *.json trace files (sorted by name) or one JSON-Lines file.
inline Dataset load_dataset(const std::filesystem::path& path, const TraceLimits& limits = {}) {
  namespace fs = std::filesystem;
  Dataset ds;
  std::uint64_t hash = fnv1a64("");
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json" &&
          entry.path().filename().string().rfind("manifest", 0) != 0 &&
          entry.path().filename().string().rfind("truth", 0) != 0) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string text = read_file(f);
      hash = fnv1a64(text, hash);
      ds.traces.push_back(trace_from_json(parse_json(text, f.string()), limits));
    }
  } else {
    const std::string text = read_file(path);
    hash = fnv1a64(text, hash);
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ds.traces.push_back(
          trace_from_json(parse_json(line, path.string() + ":" + std::to_string(lineno)), limits));
    }
  }
  ds.hash = hex64(hash);
  return ds;
}

}  // namespace persona

#endif  // PERSONA_JSON_IO_HPP_
