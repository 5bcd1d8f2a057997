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

// Comparison methods: the unweighted Bayesian update (SBU), the two
// redistribution baselines HM1/HM2 over worlds, and the case-based
// argument-belief baseline HA.

#ifndef PERSONA_BASELINES_HPP_
#define PERSONA_BASELINES_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "persona/argumentation.hpp"
#include "persona/belief.hpp"
#include "persona/error.hpp"
#include "persona/logic.hpp"

namespace persona {

// Eq-1 update fed with the raw confidence as the probability.
inline BeliefState sbu_update(const BeliefState& b, const Argument& arg, double sigma) {
  check_unit_interval(sigma, "confidence");
  return update_belief(b, arg, sigma);
}

namespace internal {

inline std::vector<Literal> ClaimLiterals(const Formula& claim, const Language& lang) {
  auto lits = as_literal_conjunction(claim);
  if (!lits) {
    throw ValidationError("non_literal_claim",
                          "HM baselines need a literal claim, got '" + to_string(claim, lang) + "'");
  }
  return *lits;
}

inline std::uint64_t ToggleMask(const std::vector<Literal>& lits, const Language& lang) {
  std::uint64_t mask = 0;
  for (const auto& l : lits) mask |= lang.atom_bit(l.atom);
  return mask;
}

// new(m) = old(m) + old(m ^ toggle) on `keep`, 0 elsewhere, then renormalized.
inline BeliefState Redistribute(const BeliefState& b, const WorldSet& keep, std::uint64_t toggle,
                                int timestep) {
  const auto prior = b.probs();
  std::vector<double> next(prior.size(), 0.0);
  double total = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) {
    if (keep.contains(m)) {
      next[m] = prior[m] + prior[m ^ toggle];
      total += next[m];
    }
  }
  if (!(total > 0.0)) {
    throw DegenerateUpdate("redistribution leaves no probability mass");
  }
  for (double& p : next) p /= total;
  return BeliefState(b.language(), std::move(next), timestep);
}

}  // namespace internal

// The world that differs from `w` exactly on the atoms of `claim` (a literal
// or conjunction of literals). Flipping twice gives `w` back.
inline World flip_counterpart(const World& w, const Formula& claim, const Language& lang) {
  const auto mask = internal::ToggleMask(internal::ClaimLiterals(claim, lang), lang);
  return World(lang, w.index() ^ mask);
}

inline BeliefState hm1_update(const BeliefState& b, const Argument& arg) {
  const Language& lang = b.language();
  const auto toggle = internal::ToggleMask(internal::ClaimLiterals(arg.claim, lang), lang);
  return internal::Redistribute(b, arg.premise_worlds, toggle, b.timestep() + 1);
}

// HM1 followed by a second redistribution towards the worlds where every
// argument adjacent to `arg` in `graph` has a false claim.
inline BeliefState hm2_update(const BeliefState& b, const Argument& arg, const AttackGraph& graph) {
  const Language& lang = b.language();
  BeliefState first = hm1_update(b, arg);
  const auto adjacent = graph.neighbours(graph.index_of(arg.id));
  if (adjacent.empty()) return first;
  WorldSet keep(lang.world_count(), true);
  std::uint64_t toggle = 0;
  for (std::size_t j : adjacent) {
    const Argument& other = graph.arguments()[j];
    toggle |= internal::ToggleMask(internal::ClaimLiterals(other.claim, lang), lang);
    keep &= truth_set(other.claim, lang).complement();
  }
  return internal::Redistribute(first, keep, toggle, first.timestep());
}

using ArgumentBeliefTable = std::map<std::string, double>;

inline constexpr double kHaDefeated = 0.2;
inline constexpr double kHaUndefeated = 0.8;

// Walks the dialogue backwards so every later belief a case refers to is
// already known. Opp(A_i) is the next event when the human speaks it;
// Pro(A_i) are later agent arguments attacking A_i.
inline ArgumentBeliefTable ha_beliefs(const DialogueTrace& trace, const AttackGraph& graph) {
  ArgumentBeliefTable table;
  const auto& events = trace.events;
  for (std::size_t i = events.size(); i-- > 0;) {
    const DialogueEvent& e = events[i];
    bool defeated = false;
    if (e.speaker == Speaker::kAgent) {
      if (i + 1 < events.size() && events[i + 1].speaker == Speaker::kHuman) {
        defeated = table.at(events[i + 1].argument_id) > 0.5;
      }
      table[e.argument_id] = defeated ? kHaDefeated : kHaUndefeated;
    } else {
      for (std::size_t j = i + 1; j < events.size() && !defeated; ++j) {
        if (events[j].speaker == Speaker::kAgent &&
            graph.attacks(events[j].argument_id, e.argument_id) &&
            table.at(events[j].argument_id) > 0.5) {
          defeated = true;
        }
      }
      if (!defeated && !e.confidence) {
        throw ValidationError("missing_confidence",
                              "human argument '" + e.argument_id + "' has no confidence");
      }
      table[e.argument_id] = defeated ? kHaDefeated : *e.confidence;
    }
  }
  return table;
}

}  // namespace persona

#endif  // PERSONA_BASELINES_HPP_
