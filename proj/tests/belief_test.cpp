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

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "persona/belief.hpp"
#include "persona/weighting.hpp"
#include "test_support.hpp"

namespace persona {
namespace {

using testing::sum_of;

// Literal per-world form of the update: worlds satisfying the premises share
// mass p in proportion to their prior, the rest share 1 - p.
std::vector<double> oracle_update(std::span<const double> prior, const WorldSet& block, double p) {
  double in = 0.0;
  double out = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) {
    (block.contains(m) ? in : out) += prior[m];
  }
  std::vector<double> next(prior.size());
  for (std::size_t m = 0; m < prior.size(); ++m) {
    next[m] = block.contains(m) ? p * prior[m] / in : (1.0 - p) * prior[m] / out;
  }
  return next;
}

TEST(BeliefStateTest, ValidatesDistribution) {
  Language lang({"a"});
  EXPECT_THROW(BeliefState(lang, {0.5}), ValidationError);
  EXPECT_THROW(BeliefState(lang, {0.7, 0.7}), ValidationError);
  EXPECT_THROW(BeliefState(lang, {1.5, -0.5}), ValidationError);
  EXPECT_NO_THROW(BeliefState(lang, {0.25, 0.75}));
}

TEST(UpdateTest, WorkedExample) {
  Language lang({"a", "b", "c"});
  Argument a1 = make_argument("A1", {"b", "b -> a"}, "a", lang);
  Argument a2 = make_argument("A2", {"!c", "!c -> !a"}, "!a", lang);
  const double p1 = confidence_to_probability(0.6, WeightingParams(0.5, 1.5));
  BeliefState t1 = update_belief(uniform_belief(lang), a1, p1);
  // m1, m2 are the worlds where A1 holds (a=T, b=T).
  for (std::uint64_t m = 0; m < 8; ++m) {
    EXPECT_NEAR(t1[m], a1.premise_worlds.contains(m) ? 0.335 : 0.055, 1e-3);
  }
  BeliefState t2 = update_belief(t1, a2, 0.9);
  for (std::uint64_t m = 0; m < 8; ++m) {
    const double expect = a2.premise_worlds.contains(m) ? 0.45 : a1.premise_worlds.contains(m) ? 0.038 : 0.006;
    EXPECT_NEAR(t2[m], expect, 1e-3);
  }
  EXPECT_EQ(t2.timestep(), 2);
  EXPECT_NEAR(sum_of(t2), 1.0, 1e-12);
}

TEST(UpdateTest, MatchesPerWorldOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    Language lang = testing::small_language(1 + trial % 4);
    BeliefState b = testing::random_belief(lang, rng);
    Argument arg = testing::random_block_argument(lang, rng, "X");
    const double in = probability_of(b, arg.premise_worlds);
    const double out = probability_of(b, arg.premise_worlds.complement());
    if (in <= 0.0 || out <= 0.0) continue;
    const double p = u(rng);
    const auto expect = oracle_update(b.probs(), arg.premise_worlds, p);
    BeliefState next = update_belief(b, arg, p);
    for (std::size_t m = 0; m < expect.size(); ++m) EXPECT_LT(std::abs(next[m] - expect[m]), 1e-12);
    ++compared;
  }
  EXPECT_GT(compared, 1000);
}

TEST(UpdateTest, HalfOnHalfBlockIsFixedPoint) {
  Language lang({"a", "b"});
  Argument a = make_argument("A", {"a"}, "a", lang);
  BeliefState b = uniform_belief(lang);
  const double p = confidence_to_probability(0.5, WeightingParams::identity());
  BeliefState next = update_belief(b, a, p);
  for (std::uint64_t m = 0; m < 4; ++m) EXPECT_DOUBLE_EQ(next[m], 0.25);
}

TEST(UpdateTest, EmptyBlockFallsBackWithWarning) {
  Language lang({"a", "b"});
  BeliefState b(lang, {0.5, 0.5, 0.0, 0.0});  // all mass on a=F
  Argument a = make_argument("A", {"a"}, "a", lang);
  BeliefState next = update_belief(b, a, 0.9);
  EXPECT_TRUE(next.warning());
  EXPECT_DOUBLE_EQ(next[0], 0.5);
  EXPECT_DOUBLE_EQ(next[1], 0.5);
  EXPECT_NEAR(sum_of(next), 1.0, 1e-12);
  BeliefState ok = update_belief(uniform_belief(lang), a, 0.9);
  EXPECT_FALSE(ok.warning());
}

TEST(UpdateTest, CertaintyZeroesComplement) {
  Language lang({"a", "b"});
  Argument a = make_argument("A", {"a"}, "a", lang);
  BeliefState next = update_belief(uniform_belief(lang), a, 1.0);
  EXPECT_DOUBLE_EQ(next[0], 0.0);
  EXPECT_DOUBLE_EQ(next[3], 0.5);
}

TEST(ProbabilityTest, FormulaAndArgumentProbability) {
  Language lang({"a", "b", "c"});
  BeliefState b = uniform_belief(lang);
  EXPECT_DOUBLE_EQ(probability_of_formula(b, parse_formula("a | b", lang)), 0.75);
  Argument a1 = make_argument("A1", {"b", "b -> a"}, "a", lang);
  EXPECT_DOUBLE_EQ(probability_of_argument(b, a1), 0.25);
}

TEST(RankCandidatesTest, OrdersByProbabilityWithTies) {
  Language lang({"a", "b"});
  BeliefState b(lang, {0.1, 0.2, 0.3, 0.4});
  std::vector<Formula> cands = {parse_formula("!a", lang), parse_formula("a", lang), parse_formula("b", lang),
                                parse_formula("a <-> b", lang)};
  // P: !a = 0.3, a = 0.7, b = 0.6, a<->b = 0.5
  Ranking r = rank_candidates(b, cands);
  EXPECT_EQ(r.order(), (std::vector<std::size_t>{1, 2, 3, 0}));
  BeliefState u = uniform_belief(lang);
  Ranking t = rank_candidates(u, cands);
  EXPECT_TRUE(t.has_ties());
  EXPECT_DOUBLE_EQ(t.ranks()[0], 2.5);
}

}  // namespace
}  // namespace persona
