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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "persona/baselines.hpp"
#include "persona/replay.hpp"
#include "test_support.hpp"

namespace persona {
namespace {

using testing::sum_of;

TEST(FlipTest, InvolutionOnClaimAtoms) {
  Language lang({"a", "b", "c"});
  Formula claim = parse_formula("a & !c", lang);
  for (std::uint64_t m = 0; m < 8; ++m) {
    World w(lang, m);
    World f = flip_counterpart(w, claim, lang);
    EXPECT_NE(f.index(), w.index());
    EXPECT_EQ(f.value(1), w.value(1));
    EXPECT_EQ(flip_counterpart(f, claim, lang), w);
  }
  EXPECT_THROW(flip_counterpart(World(lang, 0), parse_formula("a | b", lang), lang), ValidationError);
}

TEST(AppendixTest, Hm1Hm2AndHa) {
  DialogueTrace t = testing::load_trace("appendix");
  // Table order m1..m4 is (TT, TF, FT, FF): world indices 3, 2, 1, 0.
  auto table = [](const BeliefState& b) { return std::vector<double>{b[3], b[2], b[1], b[0]}; };
  auto hm1 = replay_beliefs(t, {Method::kHm1});
  EXPECT_EQ(table(hm1[1]), (std::vector<double>{0.5, 0.5, 0.0, 0.0}));
  auto hm2 = replay_beliefs(t, {Method::kHm2});
  EXPECT_EQ(table(hm2[1]), (std::vector<double>{0.5, 0.5, 0.0, 0.0}));
  EXPECT_EQ(table(hm2[2]), (std::vector<double>{0.0, 0.0, 1.0, 0.0}));
  auto ha = ha_beliefs(t, dialogue_graph(t, 1));
  EXPECT_EQ(ha.at("A1"), 0.2);
  EXPECT_EQ(ha.at("A2"), 0.6);
}

TEST(HaTest, UndefeatedAgentArgumentGetsHighBelief) {
  DialogueTrace t = testing::load_trace("appendix");
  t.events[1].confidence = 0.4;  // the human's rebuttal is weak
  auto ha = ha_beliefs(t, dialogue_graph(t, 1));
  EXPECT_EQ(ha.at("A1"), 0.8);
  EXPECT_EQ(ha.at("A2"), 0.4);
  t.events[1].confidence = std::nullopt;
  EXPECT_THROW(ha_beliefs(t, dialogue_graph(t, 1)), ValidationError);
}

TEST(SbuTest, UsesConfidenceAsProbability) {
  Language lang({"a", "b"});
  Argument a = make_argument("A", {"a"}, "a", lang);
  BeliefState b = sbu_update(uniform_belief(lang), a, 0.8);
  EXPECT_DOUBLE_EQ(b[3] + b[2], 0.8);
}

TEST(Hm1Test, DegenerateWhenNoMassCanMove) {
  Language lang({"a", "b"});
  BeliefState b(lang, {0.0, 0.0, 0.5, 0.5});  // a certainly true
  Argument nb = make_argument("B", {"!b"}, "!b", lang);
  BeliefState ok = hm1_update(b, nb);
  EXPECT_DOUBLE_EQ(ok[2], 1.0);
  Argument na = make_argument("NA", {"!a & b"}, "!a & b", lang);
  BeliefState moved = hm1_update(b, na);  // flips both atoms: pulls from a=T,b=F
  EXPECT_DOUBLE_EQ(moved[1], 1.0);
  Argument nab = make_argument("NAB", {"!a"}, "!a", lang);
  BeliefState b2(lang, {0.0, 0.0, 0.0, 1.0});
  EXPECT_NO_THROW(hm1_update(b2, nab));
  Argument wb = make_argument("WB", {"!a", "!a -> b"}, "b", lang);
  EXPECT_THROW(hm1_update(b2, wb), DegenerateUpdate);
}

// Every world-distribution method keeps the belief normalized.
TEST(NormalizationTest, FuzzAllMethods) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int updates = 0;
  for (int dialogue = 0; updates < 12000; ++dialogue) {
    Language lang = testing::small_language(1 + dialogue % 6);
    std::vector<Argument> args;
    for (int i = 0; i < 6; ++i) args.push_back(testing::random_literal_argument(lang, rng, "L" + std::to_string(i)));
    AttackGraph graph(args);
    BeliefState persona = testing::random_belief(lang, rng);
    BeliefState sbu = persona, hm1 = persona, hm2 = persona;
    const auto grid = ParamGrid::standard().points();
    for (const auto& arg : args) {
      const double sigma = u(rng);
      const WeightingParams wp = grid[rng() % grid.size()];
      persona = update_belief(persona, arg, confidence_to_probability(sigma, wp));
      sbu = sbu_update(sbu, arg, sigma);
      EXPECT_LT(std::abs(sum_of(persona) - 1.0), 1e-9);
      EXPECT_LT(std::abs(sum_of(sbu) - 1.0), 1e-9);
      updates += 2;
      try {
        hm1 = hm1_update(hm1, arg);
        EXPECT_LT(std::abs(sum_of(hm1) - 1.0), 1e-9);
        ++updates;
      } catch (const DegenerateUpdate&) {
        hm1 = uniform_belief(lang);
      }
      try {
        hm2 = hm2_update(hm2, arg, graph);
        EXPECT_LT(std::abs(sum_of(hm2) - 1.0), 1e-9);
        ++updates;
      } catch (const DegenerateUpdate&) {
        hm2 = uniform_belief(lang);
      }
    }
    // Non-literal premise blocks through the generic update.
    Argument blk = testing::random_block_argument(lang, rng, "B");
    persona = update_belief(persona, blk, u(rng));
    EXPECT_LT(std::abs(sum_of(persona) - 1.0), 1e-9);
    ++updates;
  }
  EXPECT_GE(updates, 10000);
}

}  // namespace
}  // namespace persona
