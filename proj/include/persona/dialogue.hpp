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

// Live dialogue sessions following the study loop: the agent argues, the
// human rates it, picks a counterargument, and ranks the candidate models.

#ifndef PERSONA_DIALOGUE_HPP_
#define PERSONA_DIALOGUE_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "persona/argumentation.hpp"
#include "persona/belief.hpp"
#include "persona/error.hpp"
#include "persona/json_io.hpp"
#include "persona/personalization.hpp"
#include "persona/weighting.hpp"

namespace persona {

enum class Eligibility { kAgent, kHuman, kAny };

inline Eligibility parse_eligibility(std::string_view text) {
  if (text == "agent") return Eligibility::kAgent;
  if (text == "human") return Eligibility::kHuman;
  if (text == "any") return Eligibility::kAny;
  throw ValidationError("invalid_speaker", "unknown speaker tag '" + std::string(text) + "'");
}

inline std::string_view to_string(Eligibility e) {
  switch (e) {
    case Eligibility::kAgent: return "agent";
    case Eligibility::kHuman: return "human";
    case Eligibility::kAny: return "any";
  }
  return "any";
}

inline bool may_speak(Eligibility e, Speaker s) {
  return e == Eligibility::kAny || (e == Eligibility::kAgent) == (s == Speaker::kAgent);
}

enum class ConfidenceScale { kFivePoint, kContinuous };

struct Scenario {
  std::string id;
  std::string title;
  Language language;
  AttackGraph graph;
  std::vector<Eligibility> eligibility;  // parallel to graph.arguments()
  std::vector<std::string> texts;        // display strings, parallel too
  std::vector<NamedFormula> candidate_models;
  std::string opening_argument;
  int max_rounds = 5;
  int counter_choices = 3;
  ConfidenceScale scale = ConfidenceScale::kFivePoint;
  WeightingParams initial_params = WeightingParams::identity();
  bool live_learning = true;
  // Whether the counter options are visible while the human rates the agent.
  bool show_counters_before_confidence = false;
  ParamGrid grid = ParamGrid::standard();
};

inline constexpr std::size_t kStudyCandidateCount = 4;

inline void check_scenario(const Scenario& sc) {
  if (sc.candidate_models.size() != kStudyCandidateCount) {
    throw ValidationError("invalid_scenario", "scenario '" + sc.id + "' must declare exactly 4 candidate models");
  }
  const std::size_t opening = sc.graph.index_of(sc.opening_argument);
  if (!may_speak(sc.eligibility[opening], Speaker::kAgent)) {
    throw ValidationError("invalid_scenario", "opening argument must be agent-eligible");
  }
  bool answerable = false;
  for (std::size_t j = 0; j < sc.graph.size(); ++j) {
    if (sc.graph.neighbours(j).empty()) {
      throw ValidationError("invalid_scenario",
                            "argument '" + sc.graph.arguments()[j].id + "' attacks nothing in the pool");
    }
    if (sc.graph.attacks(j, opening) && may_speak(sc.eligibility[j], Speaker::kHuman)) answerable = true;
  }
  if (!answerable) {
    throw ValidationError("invalid_scenario", "the opening argument has no human-eligible counterargument");
  }
  if (sc.max_rounds < 1 || sc.counter_choices < 1) {
    throw ValidationError("invalid_scenario", "max_rounds and counter_choices_per_turn must be positive");
  }
}

template <typename J>
Scenario scenario_from_json(const J& j) {
  using internal::Require;
  try {
    Scenario sc;
    sc.id = Require(j, "id").template get<std::string>();
    sc.title = j.value("title", sc.id);
    sc.language = Language(Require(j, "atoms").template get<std::vector<std::string>>());
    std::vector<Argument> pool;
    for (const auto& a : Require(j, "arguments")) {
      pool.push_back(make_argument(Require(a, "id").template get<std::string>(),
                                   Require(a, "premises").template get<std::vector<std::string>>(),
                                   Require(a, "claim").template get<std::string>(), sc.language));
      sc.eligibility.push_back(parse_eligibility(a.value("speaker", std::string("any"))));
      sc.texts.push_back(a.value("text", std::string()));
    }
    sc.graph = AttackGraph(std::move(pool));
    std::vector<RawCandidate> cands;
    for (const auto& c : Require(j, "candidate_models")) {
      cands.push_back({Require(c, "id").template get<std::string>(),
                       Require(c, "formula").template get<std::string>(), c.value("text", std::string())});
    }
    sc.candidate_models = parse_candidates(cands, sc.language);
    sc.opening_argument = Require(j, "opening_argument").template get<std::string>();
    sc.max_rounds = j.value("max_rounds", 5);
    sc.counter_choices = j.value("counter_choices_per_turn", 3);
    const std::string scale = j.value("confidence_scale", std::string("five_point"));
    if (scale == "five_point") {
      sc.scale = ConfidenceScale::kFivePoint;
    } else if (scale == "continuous") {
      sc.scale = ConfidenceScale::kContinuous;
    } else {
      throw ValidationError("invalid_scenario", "unknown confidence_scale '" + scale + "'");
    }
    if (j.contains("initial_params")) {
      const auto& p = j.at("initial_params");
      sc.initial_params = WeightingParams(Require(p, "s").template get<double>(),
                                          Require(p, "r").template get<double>());
    }
    sc.live_learning = j.value("live_learning", true);
    sc.show_counters_before_confidence = j.value("show_counters_before_confidence", false);
    if (j.contains("grid")) {
      sc.grid.s_values = Require(j.at("grid"), "s").template get<std::vector<double>>();
      sc.grid.r_values = Require(j.at("grid"), "r").template get<std::vector<double>>();
      for (const auto& p : sc.grid.points()) (void)p;  // validates every point
    }
    check_scenario(sc);
    return sc;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("invalid_json", std::string("malformed scenario: ") + ex.what());
  }
}

inline Scenario read_scenario_file(const std::filesystem::path& path) {
  return scenario_from_json(parse_json(read_file(path), path.string()));
}

enum class Phase { kAwaitingConfidence, kAwaitingCounter, kAwaitingRanking, kAgentTurn, kEnded };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kAwaitingConfidence: return "awaiting_confidence";
    case Phase::kAwaitingCounter: return "awaiting_counter";
    case Phase::kAwaitingRanking: return "awaiting_ranking";
    case Phase::kAgentTurn: return "agent_turn";
    case Phase::kEnded: return "ended";
  }
  return "?";
}

// How the agent picks its next argument. Neither rule comes from the study;
// greedy_believable plays the unused attacker of the human's last argument
// whose premises are most probable under the current belief.
struct AgentPolicy {
  enum class Kind { kGreedyBelievable, kScripted };
  Kind kind = Kind::kGreedyBelievable;
  std::vector<std::string> script;  // agent arguments after the opening one

  static AgentPolicy greedy() { return {}; }
  static AgentPolicy scripted(std::vector<std::string> ids) { return {Kind::kScripted, std::move(ids)}; }
};

inline std::string_view to_string(AgentPolicy::Kind k) {
  return k == AgentPolicy::Kind::kScripted ? "scripted" : "greedy_believable";
}

class Session {
 public:
  Session(std::string id, std::shared_ptr<const Scenario> scenario, AgentPolicy policy,
          std::string participant = {})
      : id_(std::move(id)),
        scenario_(std::move(scenario)),
        policy_(std::move(policy)),
        participant_(participant.empty() ? id_ : std::move(participant)),
        belief_(uniform_belief(scenario_->language)),
        live_(scenario_->initial_params) {
    for (const auto& sid : policy_.script) {
      const std::size_t j = scenario_->graph.index_of(sid);
      if (!may_speak(scenario_->eligibility[j], Speaker::kAgent)) {
        throw ValidationError("invalid_policy", "scripted argument '" + sid + "' is not agent-eligible");
      }
    }
    log(Json{{"type", "created"}, {"scenario", scenario_->id}, {"policy", to_string(policy_.kind)}});
    append_event(scenario_->graph.index_of(scenario_->opening_argument), Speaker::kAgent, std::nullopt);
    phase_ = Phase::kAwaitingConfidence;
  }

  const std::string& id() const noexcept { return id_; }
  const Scenario& scenario() const noexcept { return *scenario_; }
  const AgentPolicy& policy() const noexcept { return policy_; }
  Phase phase() const noexcept { return phase_; }
  const BeliefState& belief() const noexcept { return belief_; }
  const WeightingParams& live_params() const noexcept { return live_; }
  const std::optional<LearnedParams>& learned() const noexcept { return learned_; }
  const std::vector<DialogueEvent>& events() const noexcept { return events_; }
  const std::vector<RoundRanking>& rankings() const noexcept { return rankings_; }
  const std::optional<std::string>& end_reason() const noexcept { return end_reason_; }
  const std::vector<Json>& event_log() const noexcept { return log_; }
  int completed_rounds() const { return static_cast<int>(events_.size() / 2); }

  // Pool indices of the counterarguments currently on offer.
  const std::vector<std::size_t>& offered_counters() const noexcept { return offered_; }

  const Argument& last_argument() const { return scenario_->graph.at(events_.back().argument_id); }

  std::vector<double> candidate_probabilities() const {
    std::vector<double> out;
    for (const auto& c : scenario_->candidate_models) out.push_back(probability_of(belief_, c.worlds));
    return out;
  }

  void submit_confidence(double value) {
    require_phase(Phase::kAwaitingConfidence);
    check_confidence(value);
    apply_confidence(events_.back(), value);
    if (offered_.empty()) {
      finish("pool_exhausted");
      return;
    }
    phase_ = Phase::kAwaitingCounter;
  }

  void submit_counter(std::string_view choice_id, double confidence) {
    require_phase(Phase::kAwaitingCounter);
    const auto j = scenario_->graph.find(choice_id);
    if (j && used_.count(std::string(choice_id))) {
      throw ValidationError("repeated_argument", "argument '" + std::string(choice_id) + "' was already used");
    }
    if (!j || std::find(offered_.begin(), offered_.end(), *j) == offered_.end()) {
      throw ValidationError("choice_not_offered", "'" + std::string(choice_id) + "' is not on offer");
    }
    check_confidence(confidence);
    append_event(*j, Speaker::kHuman, events_.back().argument_id);
    apply_confidence(events_.back(), confidence);
    offered_.clear();
    phase_ = Phase::kAwaitingRanking;
  }

  void submit_ranking(const std::vector<std::string>& order) {
    require_phase(Phase::kAwaitingRanking);
    const auto& cands = scenario_->candidate_models;
    std::set<std::string> ids(order.begin(), order.end());
    bool ok = order.size() == cands.size() && ids.size() == order.size();
    for (const auto& c : cands) ok = ok && ids.count(c.id);
    if (!ok) throw ValidationError("invalid_ranking", "ranking must be a permutation of the candidate ids");
    rankings_.push_back({completed_rounds(), order});
    log(Json{{"type", "ranking"}, {"round", completed_rounds()}, {"order", order}});
    if (scenario_->live_learning) {
      learned_ = learn_params(trace(), completed_rounds(), scenario_->grid);
      live_ = learned_->params;
      log(Json{{"type", "params"}, {"learned", learned_to_json(*learned_)}});
    }
    if (completed_rounds() >= scenario_->max_rounds) {
      finish("max_rounds");
      return;
    }
    phase_ = Phase::kAgentTurn;
    agent_move();
  }

  // Ends the dialogue; `argument_ranking` optionally records the human's
  // final ranking of the presented arguments.
  DialogueTrace end(const std::string& reason, const std::vector<std::string>& argument_ranking = {}) {
    if (phase_ == Phase::kEnded) throw PhaseError("session '" + id_ + "' has already ended");
    std::set<std::string> seen;
    for (const auto& id : argument_ranking) {
      if (!used_.count(id) || !seen.insert(id).second) {
        throw ValidationError("invalid_ranking", "argument ranking lists '" + id + "' twice or never presented");
      }
    }
    final_argument_ranking_ = argument_ranking;
    finish(reason);
    return trace();
  }

  // The dialogue so far as a trace; every invariant holds by construction.
  DialogueTrace trace() const {
    DialogueTrace t;
    t.participant = participant_;
    t.language = scenario_->language;
    t.pool = scenario_->graph;
    t.events = events_;
    t.candidate_models = scenario_->candidate_models;
    t.model_rankings = rankings_;
    t.final_argument_ranking = final_argument_ranking_;
    t.metadata["scenario"] = scenario_->id;
    t.metadata["session"] = id_;
    t.metadata["policy"] = std::string(to_string(policy_.kind));
    t.metadata["confidence_scale"] =
        scenario_->scale == ConfidenceScale::kFivePoint ? "five_point" : "continuous";
    if (end_reason_) t.metadata["end_reason"] = *end_reason_;
    return t;
  }

 private:
  void require_phase(Phase expected) const {
    if (phase_ != expected) {
      throw PhaseError("session '" + id_ + "' is " + std::string(to_string(phase_)) + ", not " +
                       std::string(to_string(expected)));
    }
  }

  void check_confidence(double value) const {
    check_unit_interval(value, "confidence");
    if (scenario_->scale == ConfidenceScale::kFivePoint && !on_confidence_scale(value)) {
      throw ValidationError("confidence_off_scale", "confidence must be one of 0.1, 0.3, 0.5, 0.7, 0.9");
    }
  }

  void apply_confidence(DialogueEvent& event, double sigma) {
    event.confidence = sigma;
    event.weighting = live_;
    const double p = confidence_to_probability(sigma, live_);
    belief_ = update_belief(belief_, scenario_->graph.at(event.argument_id), p);
    log(Json{{"type", "confidence"},
             {"t", event.timestep},
             {"argument", event.argument_id},
             {"confidence", sigma},
             {"probability", p},
             {"weighting", params_to_json(live_)},
             {"belief", belief_to_json(belief_)},
             {"digest", belief_digest(belief_)}});
  }

  void append_event(std::size_t pool_index, Speaker speaker, std::optional<std::string> target) {
    DialogueEvent e;
    e.timestep = static_cast<int>(events_.size()) + 1;
    e.speaker = speaker;
    e.argument_id = scenario_->graph.arguments()[pool_index].id;
    e.attacks = std::move(target);
    used_.insert(e.argument_id);
    log(Json{{"type", "argument"},
             {"t", e.timestep},
             {"speaker", to_string(speaker)},
             {"argument", e.argument_id},
             {"attacks", e.attacks ? Json(*e.attacks) : Json(nullptr)}});
    events_.push_back(std::move(e));
    if (speaker == Speaker::kAgent) compute_offers(pool_index);
  }

  void compute_offers(std::size_t agent_arg) {
    offered_.clear();
    const auto& g = scenario_->graph;
    for (std::size_t j = 0; j < g.size() && offered_.size() < static_cast<std::size_t>(scenario_->counter_choices);
         ++j) {
      if (!used_.count(g.arguments()[j].id) && may_speak(scenario_->eligibility[j], Speaker::kHuman) &&
          g.attacks(j, agent_arg)) {
        offered_.push_back(j);
      }
    }
  }

  std::optional<std::pair<std::size_t, std::string>> choose_agent_argument() {
    const auto& g = scenario_->graph;
    const std::size_t human_last = g.index_of(events_.back().argument_id);
    if (policy_.kind == AgentPolicy::Kind::kGreedyBelievable) {
      std::optional<std::size_t> best;
      double best_p = -1.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (used_.count(g.arguments()[j].id) || !may_speak(scenario_->eligibility[j], Speaker::kAgent) ||
            !g.attacks(j, human_last)) {
          continue;
        }
        const double p = probability_of(belief_, g.arguments()[j].premise_worlds);
        if (p > best_p) {
          best_p = p;
          best = j;
        }
      }
      if (!best) return std::nullopt;
      return std::make_pair(*best, events_.back().argument_id);
    }
    if (script_pos_ >= policy_.script.size()) return std::nullopt;
    const std::string& next = policy_.script[script_pos_++];
    const std::size_t j = g.index_of(next);
    if (used_.count(next)) return std::nullopt;
    for (auto it = events_.rbegin(); it != events_.rend(); ++it) {
      if (g.attacks(j, g.index_of(it->argument_id))) return std::make_pair(j, it->argument_id);
    }
    return std::nullopt;
  }

  void agent_move() {
    auto choice = choose_agent_argument();
    if (!choice) {
      finish(policy_.kind == AgentPolicy::Kind::kScripted ? "script_exhausted" : "pool_exhausted");
      return;
    }
    append_event(choice->first, Speaker::kAgent, choice->second);
    phase_ = Phase::kAwaitingConfidence;
  }

  void finish(const std::string& reason) {
    phase_ = Phase::kEnded;
    end_reason_ = reason;
    offered_.clear();
    log(Json{{"type", "ended"}, {"reason", reason}});
  }

  void log(Json entry) {
    entry["seq"] = log_.size();
    entry["session"] = id_;
    log_.push_back(std::move(entry));
  }

  std::string id_;
  std::shared_ptr<const Scenario> scenario_;
  AgentPolicy policy_;
  std::string participant_;
  Phase phase_ = Phase::kAgentTurn;
  BeliefState belief_;
  WeightingParams live_;
  std::optional<LearnedParams> learned_;
  std::vector<DialogueEvent> events_;
  std::vector<RoundRanking> rankings_;
  std::vector<std::string> final_argument_ranking_;
  std::vector<std::size_t> offered_;
  std::set<std::string> used_;
  std::optional<std::string> end_reason_;
  std::vector<Json> log_;
  std::size_t script_pos_ = 0;
};

// Sessions by id. Operations on one session are serialized by its own lock;
// distinct sessions proceed independently.
class SessionStore {
 public:
  std::string create(std::shared_ptr<const Scenario> scenario, AgentPolicy policy, std::string participant = {}) {
    std::unique_lock lock(mu_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_++));
    std::string id = buf;
    slots_.emplace(id, std::make_shared<Slot>(id, std::move(scenario), std::move(policy), std::move(participant)));
    return id;
  }

  template <typename F>
  decltype(auto) with(const std::string& id, F&& f) {
    std::shared_ptr<Slot> slot;
    {
      std::shared_lock lock(mu_);
      auto it = slots_.find(id);
      if (it == slots_.end()) throw NotFound("unknown_session", "unknown session '" + id + "'");
      slot = it->second;
    }
    std::lock_guard guard(slot->mu);
    return std::forward<F>(f)(slot->session);
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return slots_.size();
  }

 private:
  struct Slot {
    Slot(std::string id, std::shared_ptr<const Scenario> sc, AgentPolicy policy, std::string participant)
        : session(std::move(id), std::move(sc), std::move(policy), std::move(participant)) {}
    std::mutex mu;
    Session session;
  };

  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::uint64_t next_ = 1;
};

}  // namespace persona

#endif  // PERSONA_DIALOGUE_HPP_
