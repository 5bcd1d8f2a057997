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

// Rank correlation, the paired one-sided Student t-test, and correlation
// histograms.

#ifndef PERSONA_STATISTICS_HPP_
#define PERSONA_STATISTICS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persona/error.hpp"
#include "persona/ranking.hpp"

namespace persona {

// Pearson correlation of two rank vectors. nullopt when either side has zero
// variance (every item tied), which leaves the coefficient undefined.
inline std::optional<double> spearman_rho(std::span<const double> ranks_a,
                                          std::span<const double> ranks_b) {
  if (ranks_a.size() != ranks_b.size()) {
    throw ValidationError("length_mismatch", "rankings have different lengths");
  }
  const std::size_t n = ranks_a.size();
  if (n < 2) throw ValidationError("ranking_too_short", "need at least two ranked items");
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += ranks_a[i];
    mean_b += ranks_b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ranks_a[i] - mean_a;
    const double db = ranks_b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a <= 0.0 || var_b <= 0.0) return std::nullopt;
  const double rho = cov / std::sqrt(var_a * var_b);
  return std::clamp(rho, -1.0, 1.0);
}

inline std::optional<double> spearman_rho(const Ranking& a, const Ranking& b) {
  return spearman_rho(std::span<const double>(a.ranks()), std::span<const double>(b.ranks()));
}

namespace internal {

// Continued fraction for the incomplete beta function, modified Lentz method.
inline double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace internal

// Regularized incomplete beta I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("invalid_argument", "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * internal::BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * internal::BetaContinuedFraction(b, a, 1.0 - x) / b;
}

// P(T >= |t|) for Student's t with `dof` degrees of freedom.
inline double student_t_upper_tail(double t, double dof) {
  const double x = dof / (dof + t * t);
  return 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

inline double student_t_cdf(double t, double dof) {
  const double tail = student_t_upper_tail(t, dof);
  return t > 0.0 ? 1.0 - tail : tail;
}

struct TTestResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
};

// Paired test of H1: mean(x - y) > 0.
inline TTestResult paired_t_test_one_sided(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("length_mismatch", "samples differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateStatistics("paired t-test needs at least two pairs");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i] - y[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateStatistics("paired differences have zero variance");
  TTestResult out;
  out.n = n;
  out.dof = static_cast<double>(n - 1);
  out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double tail = student_t_upper_tail(out.t, out.dof);
  out.p_value = out.t >= 0.0 ? tail : 1.0 - tail;
  return out;
}

inline constexpr std::size_t kBucketCount = 5;
inline constexpr std::array<const char*, kBucketCount> kBucketLabels = {
    "[-1, -0.75)", "[-0.75, -0.25)", "[-0.25, 0.25)", "[0.25, 0.75)", "[0.75, 1]"};

inline std::size_t bucket_of(double rho) {
  if (rho < -0.75) return 0;
  if (rho < -0.25) return 1;
  if (rho < 0.25) return 2;
  if (rho < 0.75) return 3;
  return 4;
}

struct BucketHistogram {
  std::array<std::size_t, kBucketCount> counts{};
  std::array<double, kBucketCount> fractions{};
  std::size_t total = 0;
};

inline BucketHistogram bucket_report(std::span<const double> rhos) {
  if (rhos.empty()) throw ValidationError("empty_sample", "no correlations to bucket");
  BucketHistogram h;
  for (double rho : rhos) {
    if (!(rho >= -1.0 - 1e-12 && rho <= 1.0 + 1e-12)) {
      throw ValidationError("invalid_correlation", "correlation outside [-1, 1]");
    }
    ++h.counts[bucket_of(rho)];
  }
  h.total = rhos.size();
  for (std::size_t i = 0; i < kBucketCount; ++i) {
    h.fractions[i] = static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
  }
  return h;
}

}  // namespace persona

#endif  // PERSONA_STATISTICS_HPP_
