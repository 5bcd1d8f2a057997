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

// Learning the weighting parameters (s, r) from a person's model rankings by
// grid search over rank correlation, and scoring them on later rounds.

#ifndef PERSONA_PERSONALIZATION_HPP_
#define PERSONA_PERSONALIZATION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persona/argumentation.hpp"
#include "persona/belief.hpp"
#include "persona/error.hpp"
#include "persona/ranking.hpp"
#include "persona/replay.hpp"
#include "persona/statistics.hpp"
#include "persona/weighting.hpp"

namespace persona {

// Two objectives within this distance are treated as tied maxima.
inline constexpr double kObjectiveTolerance = 1e-9;

struct ParamGrid {
  std::vector<double> s_values;
  std::vector<double> r_values;

  // s in {0.1, ..., 0.9}, r in {1, ..., 8}: 72 points.
  static ParamGrid standard() {
    ParamGrid g;
    for (int i = 1; i <= 9; ++i) g.s_values.push_back(i / 10.0);
    for (int r = 1; r <= 8; ++r) g.r_values.push_back(static_cast<double>(r));
    return g;
  }

  bool is_standard() const {
    const ParamGrid d = standard();
    return s_values == d.s_values && r_values == d.r_values;
  }

  std::size_t size() const { return s_values.size() * r_values.size(); }

  // Search order, which is also the tie-break order: smallest r, then smallest s.
  std::vector<WeightingParams> points() const {
    std::vector<WeightingParams> out;
    out.reserve(size());
    for (double r : r_values) {
      for (double s : s_values) out.emplace_back(s, r);
    }
    return out;
  }

  bool contains(const WeightingParams& p) const {
    for (const auto& q : points()) {
      if (q == p) return true;
    }
    return false;
  }
};

struct LearnedParams {
  std::string participant;  // "pooled" for the cross-participant fit
  int k = 0;
  WeightingParams params = WeightingParams::identity();
  double objective = 0.0;
  std::vector<WeightingParams> maximizers;
  int rounds_used = 0;
  int rounds_skipped = 0;     // no ranking recorded for the round
  int undefined_correlations = 0;
};

// Model ranking the participant reported, as item indices into candidate_models.
inline Ranking observed_ranking(const DialogueTrace& trace, const RoundRanking& ranking) {
  std::vector<std::size_t> order;
  for (const auto& id : ranking.order) {
    std::size_t idx = trace.candidate_models.size();
    for (std::size_t c = 0; c < trace.candidate_models.size(); ++c) {
      if (trace.candidate_models[c].id == id) idx = c;
    }
    if (idx == trace.candidate_models.size()) {
      throw ValidationError("invalid_ranking", "unknown candidate '" + id + "'");
    }
    order.push_back(idx);
  }
  return Ranking::from_order(order);
}

// Computed model rankings after rounds 1..k (element t-1 is round t).
inline std::vector<Ranking> round_rankings(const DialogueTrace& trace, int k, const ReplaySpec& spec) {
  std::vector<Ranking> out;
  BeliefState b = uniform_belief(trace.language);
  std::size_t applied = 0;
  for (int t = 1; t <= k; ++t) {
    const std::size_t upto = std::min(trace.events.size(), static_cast<std::size_t>(2 * t));
    for (; applied < upto; ++applied) b = apply_event(b, trace, applied, spec);
    out.push_back(rank_candidates(b, trace.candidate_models));
  }
  return out;
}

inline Ranking computed_ranking(const DialogueTrace& trace, int upto_round, const WeightingParams& params) {
  if (upto_round < 0 || upto_round > trace.completed_rounds()) {
    throw NotFound("missing_round", "round " + std::to_string(upto_round) + " was not completed");
  }
  if (upto_round == 0) return rank_candidates(uniform_belief(trace.language), trace.candidate_models);
  return round_rankings(trace, upto_round, ReplaySpec{Method::kPersona, params, false}).back();
}

struct Objective {
  double value = 0.0;
  int rounds_used = 0;
  int rounds_skipped = 0;
  int undefined = 0;
};

// Sum over rounds 1..k of rho(observed, computed). Rounds without a ranking
// are skipped; undefined correlations contribute nothing and are counted.
inline Objective training_objective(const DialogueTrace& trace, int k, const ReplaySpec& spec) {
  Objective obj;
  const int usable = std::min(k, trace.completed_rounds());
  obj.rounds_skipped = k - usable;
  if (usable <= 0) return obj;
  const auto computed = round_rankings(trace, usable, spec);
  for (int t = 1; t <= usable; ++t) {
    const RoundRanking* seen = trace.ranking_for(t);
    if (!seen) {
      ++obj.rounds_skipped;
      continue;
    }
    ++obj.rounds_used;
    if (auto rho = spearman_rho(observed_ranking(trace, *seen), computed[t - 1])) {
      obj.value += *rho;
    } else {
      ++obj.undefined;
    }
  }
  return obj;
}

namespace internal {

// `ks[i]` is the number of training rounds for traces[i].
inline LearnedParams GridSearch(std::span<const DialogueTrace> traces, std::span<const int> ks,
                                const ParamGrid& grid, std::string participant, int k) {
  if (traces.empty()) throw ValidationError("empty_dataset", "no traces to learn from");
  if (grid.size() == 0) throw ValidationError("empty_grid", "parameter grid is empty");
  const auto points = grid.points();
  std::vector<Objective> scores(points.size());
  for (std::size_t g = 0; g < points.size(); ++g) {
    const ReplaySpec spec{Method::kPersona, points[g], false};
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const Objective o = training_objective(traces[i], ks[i], spec);
      scores[g].value += o.value;
      scores[g].rounds_used += o.rounds_used;
      scores[g].rounds_skipped += o.rounds_skipped;
      scores[g].undefined += o.undefined;
    }
  }
  if (scores.front().rounds_used == 0) {
    throw ValidationError("no_rankings", "no model rankings available for '" + participant + "'");
  }
  double best = scores.front().value;
  for (const auto& s : scores) best = std::max(best, s.value);
  LearnedParams out;
  out.participant = std::move(participant);
  out.k = k;
  bool chosen = false;
  for (std::size_t g = 0; g < points.size(); ++g) {
    if (scores[g].value < best - kObjectiveTolerance) continue;
    out.maximizers.push_back(points[g]);
    if (!chosen) {
      chosen = true;
      out.params = points[g];
      out.objective = scores[g].value;
      out.rounds_used = scores[g].rounds_used;
      out.rounds_skipped = scores[g].rounds_skipped;
      out.undefined_correlations = scores[g].undefined;
    }
  }
  return out;
}

}  // namespace internal

// Per-participant fit on rounds 1..k of the given traces.
inline LearnedParams learn_params(std::span<const DialogueTrace> traces, int k,
                                  const ParamGrid& grid = ParamGrid::standard()) {
  if (traces.empty()) throw ValidationError("empty_dataset", "no traces to learn from");
  std::vector<int> ks(traces.size(), k);
  return internal::GridSearch(traces, ks, grid, traces.front().participant, k);
}

inline LearnedParams learn_params(const DialogueTrace& trace, int k,
                                  const ParamGrid& grid = ParamGrid::standard()) {
  return learn_params(std::span<const DialogueTrace>(&trace, 1), k, grid);
}

// One (s, r) for everybody: the objective sums over participants too.
inline LearnedParams learn_params_pooled(std::span<const DialogueTrace> traces, int k,
                                         const ParamGrid& grid = ParamGrid::standard()) {
  std::vector<int> ks(traces.size(), k);
  return internal::GridSearch(traces, ks, grid, "pooled", k);
}

// Pooled fit where each trace contributes its own number of training rounds.
inline LearnedParams learn_params_pooled(std::span<const DialogueTrace> traces, std::span<const int> ks,
                                         int k, const ParamGrid& grid = ParamGrid::standard()) {
  if (ks.size() != traces.size()) throw ValidationError("length_mismatch", "one k per trace expected");
  return internal::GridSearch(traces, ks, grid, "pooled", k);
}

// rho between the ranking observed at round k_prime and the one computed with
// the learned parameters; nullopt when the correlation is undefined.
inline std::optional<double> evaluate_round(const DialogueTrace& trace, const WeightingParams& params,
                                            int k_prime) {
  const RoundRanking* seen = trace.ranking_for(k_prime);
  if (!seen || k_prime > trace.completed_rounds()) {
    throw NotFound("missing_round", "no ranking for round " + std::to_string(k_prime));
  }
  return spearman_rho(observed_ranking(trace, *seen), computed_ranking(trace, k_prime, params));
}

inline std::optional<double> evaluate_round(const DialogueTrace& trace, const LearnedParams& learned,
                                            int k_prime) {
  if (k_prime <= learned.k) {
    throw ValidationError("invalid_round", "evaluation round must come after the training rounds");
  }
  return evaluate_round(trace, learned.params, k_prime);
}

}  // namespace persona

#endif  // PERSONA_PERSONALIZATION_HPP_
