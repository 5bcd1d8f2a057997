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

// Deductive arguments, the attack relation between them, and validated
// dialogue traces.

#ifndef PERSONA_ARGUMENTATION_HPP_
#define PERSONA_ARGUMENTATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "persona/error.hpp"
#include "persona/logic.hpp"
#include "persona/weighting.hpp"

namespace persona {

// <premises, claim> with consistent, minimal premises entailing the claim.
// Construct through validate_argument().
struct Argument {
  std::string id;
  std::vector<Formula> premises;
  Formula claim;
  // Worlds satisfying the conjunction of the premises.
  WorldSet premise_worlds;
};

// Minimality is checked by dropping one premise at a time. That is enough:
// entailment is monotone, so if some proper subset entails the claim then so
// does a subset of size |premises| - 1 containing it.
inline Argument validate_argument(std::string id, std::vector<Formula> premises, Formula claim,
                                  const Language& lang) {
  WorldSet support = truth_set(premises, lang);
  if (support.empty()) {
    throw ValidationError("inconsistent_premises",
                          "argument '" + id + "': premises are inconsistent");
  }
  const WorldSet claim_worlds = truth_set(claim, lang);
  if (!support.subset_of(claim_worlds)) {
    throw ValidationError("claim_not_entailed",
                          "argument '" + id + "': premises do not entail the claim");
  }
  for (std::size_t drop = 0; drop < premises.size(); ++drop) {
    std::vector<Formula> rest;
    for (std::size_t i = 0; i < premises.size(); ++i) {
      if (i != drop) rest.push_back(premises[i]);
    }
    if (truth_set(rest, lang).subset_of(claim_worlds)) {
      throw ValidationError("non_minimal", "argument '" + id + "': premise '" +
                                               to_string(premises[drop], lang) +
                                               "' is removable");
    }
  }
  return Argument{std::move(id), std::move(premises), std::move(claim), std::move(support)};
}

inline Argument make_argument(std::string id, const std::vector<std::string>& premises,
                              std::string_view claim, const Language& lang) {
  std::vector<Formula> parsed;
  parsed.reserve(premises.size());
  for (const auto& p : premises) parsed.push_back(parse_formula(p, lang));
  return validate_argument(std::move(id), std::move(parsed), parse_formula(claim, lang), lang);
}

// Two arguments attack each other iff their joint premises are inconsistent.
inline bool attacks(const Argument& a, const Argument& b) {
  const auto& x = a.premise_worlds;
  const auto& y = b.premise_worlds;
  for (std::size_t w = 0; w < x.universe(); ++w) {
    if (x.contains(w) && y.contains(w)) return false;
  }
  return true;
}

class AttackGraph {
 public:
  AttackGraph() = default;

  explicit AttackGraph(std::vector<Argument> pool) : arguments_(std::move(pool)) {
    const std::size_t n = arguments_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!index_.emplace(arguments_[i].id, i).second) {
        throw ValidationError("duplicate_argument",
                              "duplicate argument id '" + arguments_[i].id + "'");
      }
    }
    adjacent_.assign(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (persona::attacks(arguments_[i], arguments_[j])) {
          adjacent_[i][j] = adjacent_[j][i] = 1;
          ++edges_;
        }
      }
    }
  }

  const std::vector<Argument>& arguments() const noexcept { return arguments_; }
  std::size_t size() const noexcept { return arguments_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

  std::optional<std::size_t> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw NotFound("unknown_argument", "unknown argument '" + std::string(id) + "'");
  }

  const Argument& at(std::string_view id) const { return arguments_[index_of(id)]; }

  bool attacks(std::size_t i, std::size_t j) const { return adjacent_[i][j] != 0; }
  bool attacks(std::string_view a, std::string_view b) const {
    return attacks(index_of(a), index_of(b));
  }

  std::vector<std::size_t> neighbours(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < arguments_.size(); ++j) {
      if (adjacent_[i][j]) out.push_back(j);
    }
    return out;
  }

 private:
  std::vector<Argument> arguments_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::uint8_t>> adjacent_;
  std::size_t edges_ = 0;
};

inline AttackGraph build_attack_graph(std::vector<Argument> pool) {
  return AttackGraph(std::move(pool));
}

enum class Speaker { kAgent, kHuman };

inline std::string_view to_string(Speaker s) { return s == Speaker::kAgent ? "agent" : "human"; }

inline Speaker parse_speaker(std::string_view text) {
  if (text == "agent") return Speaker::kAgent;
  if (text == "human") return Speaker::kHuman;
  throw ValidationError("invalid_speaker", "unknown speaker '" + std::string(text) + "'");
}

// The five-point scale used by the study: very low .. very high.
inline constexpr double kConfidenceScale[] = {0.1, 0.3, 0.5, 0.7, 0.9};

inline bool on_confidence_scale(double value) {
  return std::any_of(std::begin(kConfidenceScale), std::end(kConfidenceScale),
                     [&](double v) { return std::abs(v - value) < 1e-12; });
}

// `confidence` is the human's stated confidence in the argument, whoever
// spoke it. `weighting` records the parameters a live session used to turn
// that confidence into a probability.
struct DialogueEvent {
  int timestep = 0;
  Speaker speaker = Speaker::kAgent;
  std::string argument_id;
  std::optional<double> confidence;
  std::optional<std::string> attacks;
  std::optional<WeightingParams> weighting;
};

struct NamedFormula {
  std::string id;
  Formula formula;
  WorldSet worlds;
  std::string text;
};

struct RoundRanking {
  int round = 0;
  std::vector<std::string> order;
};

struct DialogueTrace {
  std::string participant;
  Language language;
  AttackGraph pool;
  std::vector<DialogueEvent> events;
  std::vector<NamedFormula> candidate_models;
  std::vector<RoundRanking> model_rankings;  // ascending by round
  std::vector<std::string> final_argument_ranking;
  std::map<std::string, std::string> metadata;

  // A round is one agent event followed by one human event.
  int completed_rounds() const { return static_cast<int>(events.size() / 2); }

  const RoundRanking* ranking_for(int round) const {
    for (const auto& r : model_rankings) {
      if (r.round == round) return &r;
    }
    return nullptr;
  }

  const Argument& argument(const DialogueEvent& e) const { return pool.at(e.argument_id); }

  std::vector<Formula> candidate_formulas() const {
    std::vector<Formula> out;
    for (const auto& c : candidate_models) out.push_back(c.formula);
    return out;
  }
};

// Unvalidated trace contents, as read from or written to a trace file.
struct RawArgument {
  std::string id;
  std::vector<std::string> premises;
  std::string claim;
};

struct RawEvent {
  int t = 0;
  std::string speaker;
  std::string argument;
  std::optional<double> confidence;
  std::optional<std::string> attacks;
  std::optional<std::pair<double, double>> weighting;
};

struct RawCandidate {
  std::string id;
  std::string formula;
  std::string text;
};

struct RawTrace {
  std::string participant;
  std::vector<std::string> atoms;
  std::vector<RawArgument> argument_pool;
  std::vector<RawEvent> events;
  std::vector<RawCandidate> candidate_models;
  std::vector<RoundRanking> model_rankings;
  std::vector<std::string> final_argument_ranking;
  std::map<std::string, std::string> metadata;
};

struct TraceLimits {
  std::size_t min_events = 2;
  std::size_t max_events = 10;
  // Also enforced when the trace's metadata declares confidence_scale=five_point.
  bool five_point_confidence = false;
};

inline std::vector<NamedFormula> parse_candidates(const std::vector<RawCandidate>& raw,
                                                  const Language& lang) {
  std::vector<NamedFormula> out;
  std::set<std::string> ids;
  for (const auto& c : raw) {
    if (c.id.empty() || !ids.insert(c.id).second) {
      throw ValidationError("duplicate_candidate", "duplicate or empty candidate id '" + c.id + "'");
    }
    Formula f = parse_formula(c.formula, lang);
    out.push_back(NamedFormula{c.id, f, truth_set(f, lang), c.text});
  }
  return out;
}

// Checks every trace invariant and resolves ids and formulas.
inline DialogueTrace validate_trace(const RawTrace& raw, const TraceLimits& limits = {}) {
  DialogueTrace trace;
  trace.participant = raw.participant;
  trace.language = Language(raw.atoms);
  trace.metadata = raw.metadata;
  const Language& lang = trace.language;

  std::vector<Argument> pool;
  for (const auto& a : raw.argument_pool) pool.push_back(make_argument(a.id, a.premises, a.claim, lang));
  trace.pool = AttackGraph(std::move(pool));

  trace.candidate_models = parse_candidates(raw.candidate_models, lang);
  if (trace.candidate_models.empty()) {
    throw ValidationError("no_candidates", "trace declares no candidate models");
  }

  const std::size_t n = raw.events.size();
  if (n < limits.min_events || n > limits.max_events) {
    throw ValidationError("event_count", "trace has " + std::to_string(n) + " events, expected " +
                                             std::to_string(limits.min_events) + ".." +
                                             std::to_string(limits.max_events));
  }
  const bool five_point = limits.five_point_confidence ||
                          (raw.metadata.count("confidence_scale") &&
                           raw.metadata.at("confidence_scale") == "five_point");

  std::set<std::string> used;
  for (std::size_t i = 0; i < n; ++i) {
    const RawEvent& re = raw.events[i];
    DialogueEvent e;
    e.timestep = re.t;
    if (re.t <= 0 || (i > 0 && re.t <= trace.events.back().timestep)) {
      throw ValidationError("invalid_timestep", "event " + std::to_string(i + 1) +
                                                    ": timesteps must be positive and increasing");
    }
    e.speaker = parse_speaker(re.speaker);
    const Speaker expected = i % 2 == 0 ? Speaker::kAgent : Speaker::kHuman;
    if (e.speaker != expected) {
      throw ValidationError("non_alternating", "event " + std::to_string(i + 1) +
                                                   ": speakers must alternate starting with agent");
    }
    const std::size_t arg = trace.pool.index_of(re.argument);
    e.argument_id = re.argument;
    if (!used.insert(re.argument).second) {
      throw ValidationError("repeated_argument", "argument '" + re.argument + "' repeats");
    }
    if (re.confidence) {
      check_unit_interval(*re.confidence, "confidence");
      if (five_point && !on_confidence_scale(*re.confidence)) {
        throw ValidationError("confidence_off_scale",
                              "confidence " + std::to_string(*re.confidence) +
                                  " is not on the five-point scale");
      }
      e.confidence = re.confidence;
    }
    if (re.weighting) e.weighting = WeightingParams(re.weighting->first, re.weighting->second);
    if (i == 0) {
      if (re.attacks) {
        throw ValidationError("dangling_attack", "the opening event cannot attack anything");
      }
    } else {
      if (!re.attacks) {
        throw ValidationError("dangling_attack", "event " + std::to_string(i + 1) +
                                                     " does not attack an earlier event");
      }
      const bool earlier = std::any_of(trace.events.begin(), trace.events.end(),
                                       [&](const DialogueEvent& p) { return p.argument_id == *re.attacks; });
      if (!earlier || !trace.pool.attacks(arg, trace.pool.index_of(*re.attacks))) {
        throw ValidationError("dangling_attack", "event " + std::to_string(i + 1) + ": '" +
                                                     re.argument + "' does not attack earlier '" +
                                                     *re.attacks + "'");
      }
      e.attacks = re.attacks;
    }
    trace.events.push_back(std::move(e));
  }

  std::set<int> rounds;
  for (const auto& r : raw.model_rankings) {
    if (r.round < 1 || r.round > trace.completed_rounds() || !rounds.insert(r.round).second) {
      throw ValidationError("invalid_ranking", "model ranking for round " + std::to_string(r.round) +
                                                   " does not match a completed round");
    }
    if (r.order.size() != trace.candidate_models.size()) {
      throw ValidationError("ranking_length_mismatch",
                            "round " + std::to_string(r.round) + " ranks " +
                                std::to_string(r.order.size()) + " models, expected " +
                                std::to_string(trace.candidate_models.size()));
    }
    std::set<std::string> ids(r.order.begin(), r.order.end());
    for (const auto& c : trace.candidate_models) {
      if (!ids.count(c.id)) {
        throw ValidationError("invalid_ranking", "round " + std::to_string(r.round) +
                                                     " ranking is missing model '" + c.id + "'");
      }
    }
  }
  trace.model_rankings = raw.model_rankings;
  std::sort(trace.model_rankings.begin(), trace.model_rankings.end(),
            [](const RoundRanking& a, const RoundRanking& b) { return a.round < b.round; });

  std::set<std::string> ranked;
  for (const auto& id : raw.final_argument_ranking) {
    if (!used.count(id) || !ranked.insert(id).second) {
      throw ValidationError("invalid_ranking",
                            "final argument ranking lists '" + id + "' twice or never presented");
    }
  }
  trace.final_argument_ranking = raw.final_argument_ranking;
  return trace;
}

// Inverse of validate_trace; formulas are printed in canonical form.
inline RawTrace to_raw(const DialogueTrace& trace) {
  RawTrace raw;
  raw.participant = trace.participant;
  raw.atoms = trace.language.atoms();
  for (const auto& a : trace.pool.arguments()) {
    RawArgument ra{a.id, {}, to_string(a.claim, trace.language)};
    for (const auto& p : a.premises) ra.premises.push_back(to_string(p, trace.language));
    raw.argument_pool.push_back(std::move(ra));
  }
  for (const auto& e : trace.events) {
    RawEvent re{e.timestep, std::string(to_string(e.speaker)), e.argument_id, e.confidence, e.attacks, {}};
    if (e.weighting) re.weighting = std::make_pair(e.weighting->s(), e.weighting->r());
    raw.events.push_back(std::move(re));
  }
  for (const auto& c : trace.candidate_models) {
    raw.candidate_models.push_back({c.id, to_string(c.formula, trace.language), c.text});
  }
  raw.model_rankings = trace.model_rankings;
  raw.final_argument_ranking = trace.final_argument_ranking;
  raw.metadata = trace.metadata;
  return raw;
}

}  // namespace persona

#endif  // PERSONA_ARGUMENTATION_HPP_
