// Copyright 2026 The Stackviral Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STACKVIRAL_WATERFILL_HPP
#define STACKVIRAL_WATERFILL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace stackviral {

// Maximizes sum_k c_k (1 - d_k / x_k) over x >= lower, sum x = budget, where
// weight_k = sqrt(c_k d_k). The optimum is x_k = max(lower_k, weight_k * level)
// for the unique level that spends the budget exactly. Only indices with
// active[k] are allocated; the rest stay 0. Returns nullopt when the lower
// bounds alone exceed the budget.
inline std::optional<std::vector<double>> waterfill(std::span<const double> lower,
                                                    std::span<const double> weight,
                                                    std::span<const int> active,
                                                    double budget, std::size_t size) {
  double lower_sum = 0.0;
  for (int k : active) lower_sum += lower[k];
  if (lower_sum > budget * (1.0 + 1e-12) + 1e-15) return std::nullopt;

  std::vector<double> x(size, 0.0);
  for (int k : active) x[k] = lower[k];
  if (active.empty()) return x;

  // Breakpoint b_k = lower_k / weight_k: region k lifts off its bound once
  // the level passes b_k. Zero-weight regions never lift off.
  std::vector<int> order;
  for (int k : active)
    if (weight[k] > 0.0) order.push_back(k);
  if (order.empty()) return x;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return lower[a] * weight[b] < lower[b] * weight[a];
  });

  // spend(level) = sum_{b_k >= level} lower_k + level * sum_{b_k < level} weight_k
  double free_weight = 0.0;
  double bound_sum = lower_sum;
  double level = 0.0;
  std::size_t i = 0;
  while (true) {
    if (i < order.size()) {
      const int k = order[i];
      const double next = lower[k] / weight[k];
      if (bound_sum + next * free_weight >= budget) {
        level = free_weight > 0.0 ? (budget - bound_sum) / free_weight : next;
        break;
      }
      bound_sum -= lower[k];
      free_weight += weight[k];
      ++i;
    } else {
      level = (budget - bound_sum) / free_weight;
      break;
    }
  }
  for (int k : active)
    if (weight[k] > 0.0) x[k] = std::max(lower[k], weight[k] * level);
  return x;
}

}  // namespace stackviral

#endif  // STACKVIRAL_WATERFILL_HPP
