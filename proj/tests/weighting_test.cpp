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
#include <vector>

#include <gtest/gtest.h>

#include "persona/personalization.hpp"
#include "persona/weighting.hpp"

namespace persona {
namespace {

const std::vector<WeightingParams> kCurveFamily = {{0.5, 1}, {0.5, 2}, {0.5, 3}, {0.3, 3}, {0.7, 3}};

TEST(WeightingParamsTest, Validation) {
  EXPECT_THROW(WeightingParams(0.0, 1.0), ValidationError);
  EXPECT_THROW(WeightingParams(1.0, 1.0), ValidationError);
  EXPECT_THROW(WeightingParams(0.5, 0.99), ValidationError);
  EXPECT_NO_THROW(WeightingParams(0.01, 100.0));
}

TEST(WeightingTest, WorkedExampleInverse) {
  const double p = confidence_to_probability(0.6, WeightingParams(0.5, 1.5));
  EXPECT_NEAR(p, 0.5 + 0.5 * std::pow(0.2, 2.0 / 3.0), 1e-15);
  EXPECT_NEAR(p, 0.67, 1e-3);
}

TEST(WeightingTest, CrossoverAndEndpoints) {
  for (const auto& wp : ParamGrid::standard().points()) {
    EXPECT_DOUBLE_EQ(probability_to_confidence(0.5, wp), wp.s());
    EXPECT_DOUBLE_EQ(probability_to_confidence(0.0, wp), 0.0);
    EXPECT_DOUBLE_EQ(probability_to_confidence(1.0, wp), 1.0);
    EXPECT_DOUBLE_EQ(confidence_to_probability(wp.s(), wp), 0.5);
  }
}

TEST(WeightingTest, IdentityAtLinearParams) {
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    EXPECT_NEAR(probability_to_confidence(p, WeightingParams::identity()), p, 1e-15);
    EXPECT_NEAR(confidence_to_probability(p, WeightingParams::identity()), p, 1e-15);
  }
}

TEST(WeightingTest, ForwardMatchesPiecewiseTranscription) {
  for (const auto& wp : ParamGrid::standard().points()) {
    const double s = wp.s(), r = wp.r();
    for (int i = 0; i <= 100; ++i) {
      const double p = i / 100.0;
      const double expect = p > 0.5 ? s + (1 - s) * std::pow(2 * p - 1, r) : s - s * std::pow(1 - 2 * p, r);
      EXPECT_NEAR(probability_to_confidence(p, wp), expect, 1e-15);
    }
  }
}

TEST(WeightingTest, MonotoneOnCurveFamily) {
  for (const auto& wp : kCurveFamily) {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double sigma = probability_to_confidence(i / 1000.0, wp);
      EXPECT_GE(sigma, prev);
      prev = sigma;
    }
  }
}

TEST(WeightingTest, RoundTripOnGrid) {
  for (const auto& wp : ParamGrid::standard().points()) {
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      EXPECT_LT(std::abs(probability_from_offset(confidence_offset(p, wp), wp) - p), 1e-9);
    }
  }
}

TEST(WeightingTest, ScalarConfidenceIsCrossoverPlusOffset) {
  for (const auto& wp : ParamGrid::standard().points()) {
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      const double sigma = probability_to_confidence(p, wp);
      EXPECT_EQ(sigma, wp.s() + confidence_offset(p, wp));
      EXPECT_EQ(confidence_to_probability(sigma, wp), probability_from_offset(sigma - wp.s(), wp));
    }
  }
}

TEST(WeightingTest, ScalarConfidenceCollapsesNearCrossover) {
  // (0.002)^8 is far below the spacing of doubles around 0.5.
  const WeightingParams wp(0.5, 8.0);
  EXPECT_EQ(probability_to_confidence(0.501, wp), 0.5);
  EXPECT_GT(confidence_offset(0.501, wp), 0.0);
  // Away from the crossover the scalar pair inverts to well within 1e-9.
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    if (std::abs(p - 0.5) < 0.1) continue;
    EXPECT_LT(std::abs(confidence_to_probability(probability_to_confidence(p, wp), wp) - p), 1e-9);
  }
}

TEST(WeightingTest, OffsetRange) {
  const WeightingParams wp(0.3, 2.0);
  EXPECT_EQ(probability_from_offset(-0.3, wp), 0.0);
  EXPECT_EQ(probability_from_offset(0.7, wp), 1.0);
  EXPECT_THROW(probability_from_offset(0.71, wp), ValidationError);
  EXPECT_THROW(probability_from_offset(-0.31, wp), ValidationError);
}

TEST(WeightingTest, RejectsOutOfRange) {
  EXPECT_THROW(probability_to_confidence(1.5, WeightingParams::identity()), ValidationError);
  EXPECT_THROW(confidence_to_probability(-0.1, WeightingParams::identity()), ValidationError);
}

}  // namespace
}  // namespace persona
