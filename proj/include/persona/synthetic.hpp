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

// Simulated study participants. A synthetic human holds its own belief,
// updated with its true weighting parameters, and answers a live session.

#ifndef PERSONA_SYNTHETIC_HPP_
#define PERSONA_SYNTHETIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "persona/argumentation.hpp"
#include "persona/belief.hpp"
#include "persona/dialogue.hpp"
#include "persona/personalization.hpp"
#include "persona/ranking.hpp"
#include "persona/weighting.hpp"

namespace persona {

struct SyntheticHumanConfig {
  WeightingParams true_params = WeightingParams::identity();
  double noise = 0.0;  // ranking perturbation rate in [0, 1]
  std::uint64_t seed = 0;
  int rounds = 5;
  std::string participant = "synthetic";
  AgentPolicy policy = AgentPolicy::greedy();
};

// Nearest point of the five-point scale; halfway cases go to the lower one.
inline double snap_to_scale(double sigma) {
  double best = kConfidenceScale[0];
  for (double v : kConfidenceScale) {
    if (std::abs(v - sigma) < std::abs(best - sigma) - 1e-12) best = v;
  }
  return best;
}

// Lazy adjacent-transposition walk: ceil(noise * 3 n^2) steps, each swapping
// a uniformly chosen neighbouring pair with probability one half.
template <typename T>
void perturb_order(std::vector<T>& order, double noise, std::mt19937_64& rng) {
  check_unit_interval(noise, "noise");
  const std::size_t n = order.size();
  if (n < 2 || noise <= 0.0) return;
  const auto steps = static_cast<std::size_t>(std::ceil(noise * 3.0 * static_cast<double>(n * n)));
  for (std::size_t i = 0; i < steps; ++i) {
    const std::uint64_t draw = rng();
    if (draw & 1U) {
      const std::size_t at = static_cast<std::size_t>((draw >> 1) % (n - 1));
      std::swap(order[at], order[at + 1]);
    }
  }
}

class SyntheticHuman {
 public:
  SyntheticHuman(const Language& lang, WeightingParams params, double noise, std::uint64_t seed)
      : mind_(uniform_belief(lang)), params_(params), noise_(noise), rng_(seed) {
    check_unit_interval(noise, "noise");
  }

  const BeliefState& belief() const noexcept { return mind_; }

  double rate(const Argument& arg) const {
    return snap_to_scale(probability_to_confidence(probability_of(mind_, arg.premise_worlds), params_));
  }

  void absorb(const Argument& arg, double sigma) {
    mind_ = update_belief(mind_, arg, confidence_to_probability(sigma, params_));
  }

  // Most believable of the offered pool indices; first one wins a tie.
  std::size_t pick(const AttackGraph& graph, const std::vector<std::size_t>& offered) const {
    std::size_t best = offered.front();
    double best_p = -1.0;
    for (std::size_t j : offered) {
      const double p = probability_of(mind_, graph.arguments()[j].premise_worlds);
      if (p > best_p) {
        best_p = p;
        best = j;
      }
    }
    return best;
  }

  // Items ordered by descending score under the internal belief, then perturbed.
  std::vector<std::string> rank(const std::vector<std::string>& ids, const std::vector<WorldSet>& sets) {
    std::vector<double> scores;
    for (const auto& s : sets) scores.push_back(probability_of(mind_, s));
    std::vector<std::string> out;
    for (std::size_t i : Ranking::from_scores(scores).order()) out.push_back(ids[i]);
    perturb_order(out, noise_, rng_);
    return out;
  }

 private:
  BeliefState mind_;
  WeightingParams params_;
  double noise_;
  std::mt19937_64 rng_;
};

inline DialogueTrace generate_synthetic_trace(const SyntheticHumanConfig& cfg, const Scenario& scenario) {
  auto sc = std::make_shared<Scenario>(scenario);
  sc->max_rounds = std::min(cfg.rounds, scenario.max_rounds);
  sc->scale = ConfidenceScale::kFivePoint;
  Session session(cfg.participant, sc, cfg.policy, cfg.participant);
  SyntheticHuman human(sc->language, cfg.true_params, cfg.noise, cfg.seed);
  const AttackGraph& graph = sc->graph;

  std::vector<std::string> cand_ids;
  std::vector<WorldSet> cand_sets;
  for (const auto& c : sc->candidate_models) {
    cand_ids.push_back(c.id);
    cand_sets.push_back(c.worlds);
  }

  while (session.phase() != Phase::kEnded) {
    switch (session.phase()) {
      case Phase::kAwaitingConfidence: {
        const Argument& arg = session.last_argument();
        const double sigma = human.rate(arg);
        session.submit_confidence(sigma);
        human.absorb(arg, sigma);
        break;
      }
      case Phase::kAwaitingCounter: {
        const Argument& arg = graph.arguments()[human.pick(graph, session.offered_counters())];
        const double sigma = human.rate(arg);
        session.submit_counter(arg.id, sigma);
        human.absorb(arg, sigma);
        break;
      }
      case Phase::kAwaitingRanking:
        session.submit_ranking(human.rank(cand_ids, cand_sets));
        break;
      case Phase::kAgentTurn:
      case Phase::kEnded:
        break;
    }
  }

  DialogueTrace trace = session.trace();
  std::vector<std::string> arg_ids;
  std::vector<WorldSet> arg_sets;
  for (const auto& e : trace.events) {
    arg_ids.push_back(e.argument_id);
    arg_sets.push_back(trace.argument(e).premise_worlds);
  }
  trace.final_argument_ranking = human.rank(arg_ids, arg_sets);
  trace.metadata["generator"] = "synthetic";
  trace.metadata.erase("session");
  return trace;
}

struct CohortMember {
  std::string participant;
  WeightingParams true_params = WeightingParams::identity();
  std::uint64_t seed = 0;
};

// Per-participant seeds and planted parameters, all derived from one seed.
// With `planted` unset each participant draws a point of `grid` uniformly.
inline std::vector<CohortMember> plan_cohort(std::size_t n, std::uint64_t seed, const ParamGrid& grid,
                                             std::optional<WeightingParams> planted = std::nullopt) {
  std::mt19937_64 rng(seed);
  const auto points = grid.points();
  if (points.empty() && !planted) throw ValidationError("empty_grid", "parameter grid is empty");
  std::vector<CohortMember> out;
  for (std::size_t i = 0; i < n; ++i) {
    CohortMember m;
    char buf[32];
    std::snprintf(buf, sizeof buf, "p%03zu", i + 1);
    m.participant = buf;
    m.true_params = planted ? *planted : points[rng() % points.size()];
    m.seed = rng();
    out.push_back(m);
  }
  return out;
}

inline std::vector<DialogueTrace> generate_cohort(const Scenario& scenario, const std::vector<CohortMember>& members,
                                                  double noise, int rounds,
                                                  const AgentPolicy& policy = AgentPolicy::greedy()) {
  std::vector<DialogueTrace> out;
  for (const auto& m : members) {
    SyntheticHumanConfig cfg;
    cfg.true_params = m.true_params;
    cfg.noise = noise;
    cfg.seed = m.seed;
    cfg.rounds = rounds;
    cfg.participant = m.participant;
    cfg.policy = policy;
    out.push_back(generate_synthetic_trace(cfg, scenario));
  }
  return out;
}

}  // namespace persona

#endif  // PERSONA_SYNTHETIC_HPP_
