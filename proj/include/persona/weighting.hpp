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

// Probability weighting between an argument's probability and the confidence
// a person reports for it. `s` is the confidence reported at probability 0.5
// and `r` controls how strongly the curve bends away from linear.

#ifndef PERSONA_WEIGHTING_HPP_
#define PERSONA_WEIGHTING_HPP_

#include <cmath>
#include <string>

#include "persona/error.hpp"

namespace persona {

class WeightingParams {
 public:
  WeightingParams(double s, double r) : s_(s), r_(r) {
    if (!(s > 0.0 && s < 1.0)) {
      throw ValidationError("invalid_params", "s must lie in (0, 1), got " + std::to_string(s));
    }
    if (!(r >= 1.0) || !std::isfinite(r)) {
      throw ValidationError("invalid_params", "r must lie in [1, inf), got " + std::to_string(r));
    }
  }

  // The linear case: confidence equals probability.
  static WeightingParams identity() { return {0.5, 1.0}; }

  double s() const noexcept { return s_; }
  double r() const noexcept { return r_; }

  friend bool operator==(const WeightingParams&, const WeightingParams&) = default;

 private:
  double s_;
  double r_;
};

inline void check_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(std::string(what) + "_out_of_range",
                          std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

// Signed distance of the confidence from the crossover s. Near p = 0.5 with a
// large r this is far below the spacing of doubles around s, so it is kept
// apart from s to stay invertible.
inline double confidence_offset(double p, const WeightingParams& params) {
  check_unit_interval(p, "probability");
  const double s = params.s();
  if (p > 0.5) return (1.0 - s) * std::pow(2.0 * p - 1.0, params.r());
  return -(s * std::pow(1.0 - 2.0 * p, params.r()));
}

// Inverse of confidence_offset.
inline double probability_from_offset(double offset, const WeightingParams& params) {
  const double s = params.s();
  if (!(offset >= -s && offset <= 1.0 - s)) {
    throw ValidationError("confidence_out_of_range", "confidence offset outside [-s, 1 - s]");
  }
  const double inv_r = 1.0 / params.r();
  if (offset <= 0.0) return 0.5 - 0.5 * std::pow(-offset / s, inv_r);
  return 0.5 + 0.5 * std::pow(offset / (1.0 - s), inv_r);
}

// Probability -> reported confidence.
inline double probability_to_confidence(double p, const WeightingParams& params) {
  return params.s() + confidence_offset(p, params);
}

// Reported confidence -> probability; inverse of probability_to_confidence
// wherever the confidence differs from s by more than rounding.
inline double confidence_to_probability(double sigma, const WeightingParams& params) {
  check_unit_interval(sigma, "confidence");
  return probability_from_offset(sigma - params.s(), params);
}

}  // namespace persona

#endif  // PERSONA_WEIGHTING_HPP_
