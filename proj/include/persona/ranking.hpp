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

#ifndef PERSONA_RANKING_HPP_
#define PERSONA_RANKING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "persona/error.hpp"

namespace persona {

// Scores closer than this are treated as tied when ranking.
inline constexpr double kTieTolerance = 1e-12;

// A ranking of `size()` items, best first. `ranks()[i]` is the 1-based rank of
// item i, averaged over tie groups (fractional ranking).
class Ranking {
 public:
  Ranking() = default;

  // Higher score ranks first. Equal scores keep input order in `order()` and
  // share their average rank.
  static Ranking from_scores(std::span<const double> scores, double tie_tolerance = kTieTolerance) {
    Ranking out;
    const std::size_t n = scores.size();
    out.order_.resize(n);
    std::iota(out.order_.begin(), out.order_.end(), std::size_t{0});
    std::stable_sort(out.order_.begin(), out.order_.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    out.ranks_.assign(n, 0.0);
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n &&
             std::abs(scores[out.order_[start]] - scores[out.order_[end]]) <= tie_tolerance) {
        ++end;
      }
      // positions start..end-1 hold ranks start+1..end
      const double avg = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
      for (std::size_t i = start; i < end; ++i) out.ranks_[out.order_[i]] = avg;
      if (end - start > 1) out.ties_ = true;
      start = end;
    }
    return out;
  }

  // `order` lists item indices best first and must be a permutation.
  static Ranking from_order(std::span<const std::size_t> order) {
    Ranking out;
    const std::size_t n = order.size();
    out.order_.assign(order.begin(), order.end());
    out.ranks_.assign(n, 0.0);
    std::vector<bool> seen(n, false);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t item = order[pos];
      if (item >= n || seen[item]) {
        throw ValidationError("invalid_ranking", "ranking is not a permutation");
      }
      seen[item] = true;
      out.ranks_[item] = static_cast<double>(pos + 1);
    }
    return out;
  }

  const std::vector<std::size_t>& order() const& noexcept { return order_; }
  std::vector<std::size_t> order() && noexcept { return std::move(order_); }
  const std::vector<double>& ranks() const& noexcept { return ranks_; }
  std::vector<double> ranks() && noexcept { return std::move(ranks_); }
  std::size_t size() const noexcept { return order_.size(); }
  bool has_ties() const noexcept { return ties_; }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> ranks_;
  bool ties_ = false;
};

}  // namespace persona

#endif  // PERSONA_RANKING_HPP_
