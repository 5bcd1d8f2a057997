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

// Replaying a dialogue trace through one of the world-distribution methods.

#ifndef PERSONA_REPLAY_HPP_
#define PERSONA_REPLAY_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "persona/argumentation.hpp"
#include "persona/baselines.hpp"
#include "persona/belief.hpp"
#include "persona/weighting.hpp"

namespace persona {

// Selector strings shared by the CLI and the service.
enum class Method { kPersona, kGeneric, kSbu, kHm1, kHm2, kHa };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kPersona: return "persona";
    case Method::kGeneric: return "generic";
    case Method::kSbu: return "sbu";
    case Method::kHm1: return "hm1";
    case Method::kHm2: return "hm2";
    case Method::kHa: return "ha";
  }
  return "?";
}

inline Method parse_method(std::string_view text) {
  for (Method m : {Method::kPersona, Method::kGeneric, Method::kSbu, Method::kHm1, Method::kHm2,
                   Method::kHa}) {
    if (to_string(m) == text) return m;
  }
  throw ValidationError("unknown_method", "unknown method '" + std::string(text) + "'");
}

struct ReplaySpec {
  Method method = Method::kPersona;
  WeightingParams params = WeightingParams::identity();
  // Prefer the parameters a live session stored on each event.
  bool recorded_weighting = false;
};

// Attack graph over the arguments presented in events [0, upto].
inline AttackGraph dialogue_graph(const DialogueTrace& trace, std::size_t upto) {
  std::vector<Argument> args;
  for (std::size_t i = 0; i <= upto && i < trace.events.size(); ++i) {
    args.push_back(trace.argument(trace.events[i]));
  }
  return AttackGraph(std::move(args));
}

// Probability the weighted methods feed into the update for `event`.
inline double event_probability(const DialogueEvent& event, const ReplaySpec& spec) {
  const WeightingParams& params =
      spec.recorded_weighting && event.weighting ? *event.weighting : spec.params;
  return confidence_to_probability(*event.confidence, params);
}

// HM2 looks at the attack structure among the arguments exchanged so far.
inline BeliefState apply_event(const BeliefState& b, const DialogueTrace& trace, std::size_t index,
                               const ReplaySpec& spec) {
  const DialogueEvent& event = trace.events.at(index);
  const Argument& arg = trace.argument(event);
  switch (spec.method) {
    case Method::kPersona:
    case Method::kGeneric:
      if (!event.confidence) return b;
      return update_belief(b, arg, event_probability(event, spec));
    case Method::kSbu:
      if (!event.confidence) return b;
      return sbu_update(b, arg, *event.confidence);
    case Method::kHm1:
      return hm1_update(b, arg);
    case Method::kHm2:
      return hm2_update(b, arg, dialogue_graph(trace, index));
    case Method::kHa:
      break;
  }
  throw ValidationError("unknown_method", "HA does not produce a world distribution");
}

// Beliefs after 0, 1, ..., `count` events; element 0 is the uniform prior.
inline std::vector<BeliefState> replay_beliefs(const DialogueTrace& trace, const ReplaySpec& spec,
                                               std::size_t count = static_cast<std::size_t>(-1)) {
  count = std::min(count, trace.events.size());
  std::vector<BeliefState> out;
  out.reserve(count + 1);
  out.push_back(uniform_belief(trace.language));
  for (std::size_t i = 0; i < count; ++i) out.push_back(apply_event(out.back(), trace, i, spec));
  return out;
}

inline BeliefState replay_final(const DialogueTrace& trace, const ReplaySpec& spec,
                                std::size_t count = static_cast<std::size_t>(-1)) {
  count = std::min(count, trace.events.size());
  BeliefState b = uniform_belief(trace.language);
  for (std::size_t i = 0; i < count; ++i) b = apply_event(b, trace, i, spec);
  return b;
}

// True when every argument in the trace has a literal claim, as HM1/HM2 need.
inline bool has_literal_claims(const DialogueTrace& trace) {
  for (const auto& e : trace.events) {
    if (!as_literal_conjunction(trace.argument(e).claim)) return false;
  }
  return true;
}

}  // namespace persona

#endif  // PERSONA_REPLAY_HPP_
