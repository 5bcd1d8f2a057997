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

// A distribution over the worlds of a language, standing for the agent's
// estimate of what the human believes, and its update on a new argument.

#ifndef PERSONA_BELIEF_HPP_
#define PERSONA_BELIEF_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "persona/argumentation.hpp"
#include "persona/error.hpp"
#include "persona/logic.hpp"
#include "persona/ranking.hpp"

namespace persona {

inline constexpr double kNormalizationTolerance = 1e-9;

class BeliefState {
 public:
  BeliefState(Language lang, std::vector<double> probs, int timestep = 0, bool warning = false)
      : language_(std::move(lang)), probs_(std::move(probs)), timestep_(timestep), warning_(warning) {
    if (probs_.size() != language_.world_count()) {
      throw ValidationError("invalid_belief", "belief has " + std::to_string(probs_.size()) +
                                                  " entries for " +
                                                  std::to_string(language_.world_count()) + " worlds");
    }
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("invalid_belief", "belief entry outside [0, 1]");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      throw ValidationError("invalid_belief", "belief sums to " + std::to_string(total));
    }
  }

  const Language& language() const noexcept { return language_; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t world) const { return probs_[world]; }
  int timestep() const noexcept { return timestep_; }
  // Set when the last update hit an empty block and fell back to conditioning.
  bool warning() const noexcept { return warning_; }

 private:
  Language language_;
  std::vector<double> probs_;
  int timestep_;
  bool warning_;
};

inline BeliefState uniform_belief(const Language& lang) {
  const std::size_t n = lang.world_count();
  return BeliefState(lang, std::vector<double>(n, 1.0 / static_cast<double>(n)), 0);
}

namespace internal {

inline std::vector<double> Normalized(std::vector<double> probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  return probs;
}

}  // namespace internal

// Rescales the worlds in `block` to total mass `p` and the rest to 1 - p,
// keeping ratios within each side. When a side has no prior mass but would
// need some, all mass goes to the other side and the result is flagged.
inline BeliefState update_belief(const BeliefState& b, const WorldSet& block, double p) {
  check_unit_interval(p, "probability");
  const auto prior = b.probs();
  double mass_in = 0.0;
  double mass_out = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) {
    (block.contains(m) ? mass_in : mass_out) += prior[m];
  }
  double target_in = p;
  double target_out = 1.0 - p;
  bool warning = false;
  if ((mass_in <= 0.0 && target_in > 0.0) || (mass_out <= 0.0 && target_out > 0.0)) {
    warning = true;
    target_in = mass_in > 0.0 ? 1.0 : 0.0;
    target_out = 1.0 - target_in;
  }
  std::vector<double> next(prior.size(), 0.0);
  for (std::size_t m = 0; m < prior.size(); ++m) {
    if (block.contains(m)) {
      if (mass_in > 0.0) next[m] = prior[m] / mass_in * target_in;
    } else {
      if (mass_out > 0.0) next[m] = prior[m] / mass_out * target_out;
    }
  }
  return BeliefState(b.language(), internal::Normalized(std::move(next)), b.timestep() + 1, warning);
}

// "m satisfies A" means m satisfies every premise of A.
inline BeliefState update_belief(const BeliefState& b, const Argument& arg, double p) {
  return update_belief(b, arg.premise_worlds, p);
}

inline double probability_of(const BeliefState& b, const WorldSet& worlds) {
  double total = 0.0;
  const auto probs = b.probs();
  for (std::size_t m = 0; m < probs.size(); ++m) {
    if (worlds.contains(m)) total += probs[m];
  }
  return total;
}

inline double probability_of_formula(const BeliefState& b, const Formula& f) {
  return probability_of(b, truth_set(f, b.language()));
}

inline double probability_of_argument(const BeliefState& b, const Argument& arg) {
  return probability_of(b, arg.premise_worlds);
}

// Candidates by descending probability; equal probabilities keep input order.
inline Ranking rank_candidates(const BeliefState& b, std::span<const Formula> candidates) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& f : candidates) scores.push_back(probability_of_formula(b, f));
  return Ranking::from_scores(scores);
}

inline Ranking rank_candidates(const BeliefState& b, std::span<const NamedFormula> candidates) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(probability_of(b, c.worlds));
  return Ranking::from_scores(scores);
}

}  // namespace persona

#endif  // PERSONA_BELIEF_HPP_
