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

#ifndef STACKVIRAL_ORACLE_HPP
#define STACKVIRAL_ORACLE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackviral/model.hpp"
#include "stackviral/region_set.hpp"
#include "stackviral/scenario.hpp"

// Brute-force ground truth. Nothing here calls into the closed-form follower
// or the leader solver; only the steady-state map and the utilities are shared.

namespace stackviral::oracle {

struct GridSpec {
  double step = 0.01;
  std::uint64_t max_points = 50'000'000;
};

// Number of K-vectors of multiples of `step` summing to at most `budget`:
// C(N + K, K) with N = floor(budget / step). Saturates at uint64 max.
inline std::uint64_t grid_point_count(double budget, int K, double step) {
  const auto n = static_cast<std::uint64_t>(std::floor(budget / step + 1e-9));
  long double c = 1.0L;
  for (int i = 1; i <= K; ++i) c = c * static_cast<long double>(n + i) / i;
  if (c >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
    return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::llround(c));
}

namespace detail {

template <typename Fn>
void compositions(std::vector<int>& counts, int pos, int remaining, bool exact, Fn& fn) {
  const int K = static_cast<int>(counts.size());
  if (pos == K - 1) {
    for (int c = exact ? remaining : 0; c <= remaining; ++c) {
      counts[pos] = c;
      fn(std::as_const(counts));
    }
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    counts[pos] = c;
    compositions(counts, pos + 1, remaining - c, exact, fn);
  }
}

}  // namespace detail

// Visits every nonnegative K-vector with entries in {0, step, 2 step, ...}
// summing to at most `budget`, the zero vector first.
template <typename Fn>
void for_each_grid_allocation(double budget, int K, const GridSpec& grid, Fn&& fn) {
  if (!(grid.step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grid step must be > 0");
  if (!(budget >= 0.0)) throw Error(ErrorCode::kNegativeBudget, "grid budget must be >= 0");
  const std::uint64_t count = grid_point_count(budget, K, grid.step);
  if (count > grid.max_points)
    throw Error(ErrorCode::kGridTooLarge, std::to_string(count) + " grid points exceed cap " +
                                              std::to_string(grid.max_points));
  const int n = static_cast<int>(std::floor(budget / grid.step + 1e-9));
  std::vector<int> counts(K, 0);
  Allocation point(K, 0.0);
  auto visit = [&](const std::vector<int>& c) {
    for (int k = 0; k < K; ++k) point[k] = c[k] * grid.step;
    fn(std::as_const(point));
  };
  detail::compositions(counts, 0, n, false, visit);
}

inline std::vector<Allocation> grid_allocations(double budget, int K, const GridSpec& grid) {
  std::vector<Allocation> out;
  for_each_grid_allocation(budget, K, grid, [&](const Allocation& a) { out.push_back(a); });
  return out;
}

// Points of the grid lying on the full-budget face. The spacing is
// budget / floor(budget / step), which equals `step` whenever the step divides
// the budget.
template <typename Fn>
void for_each_face_allocation(double budget, int K, const GridSpec& grid, Fn&& fn) {
  if (!(grid.step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grid step must be > 0");
  const int n = static_cast<int>(std::floor(budget / grid.step + 1e-9));
  Allocation point(K, 0.0);
  if (n == 0) {
    fn(std::as_const(point));
    return;
  }
  const std::uint64_t count = grid_point_count(n, K - 1, 1.0);
  if (count > grid.max_points)
    throw Error(ErrorCode::kGridTooLarge, std::to_string(count) + " face points exceed cap " +
                                              std::to_string(grid.max_points));
  const double spacing = budget / n;
  std::vector<int> counts(K, 0);
  auto visit = [&](const std::vector<int>& c) {
    for (int k = 0; k < K; ++k) point[k] = c[k] * spacing;
    fn(std::as_const(point));
  };
  detail::compositions(counts, 0, n, true, visit);
}

struct FollowerGridResult {
  Allocation allocation;
  double utility = 0.0;
};

// Best follower grid allocation against gamma1. The follower's revenue never
// decreases when it spends more in a region, so the maximum over the
// <=-budget grid is attained on the full-budget face, which is all we scan.
// Ties keep the first point in enumeration order.
inline FollowerGridResult oracle_follower_br(std::span<const double> gamma1, const Scenario& s,
                                             const GridSpec& grid) {
  FollowerGridResult best;
  best.allocation.assign(s.K, 0.0);
  best.utility = 0.0;
  bool first = true;
  for_each_face_allocation(s.B2, s.K, grid, [&](const Allocation& a) {
    const double u = follower_utility(a, gamma1, s);
    if (first || u > best.utility) {
      best.utility = u;
      best.allocation = a;
      first = false;
    }
  });
  return best;
}

// Optimal follower spend when it must win exactly `winning`: each region at
// least its capture threshold, the rest of the budget spread by a water level
// found by bisection. Returns false when the thresholds alone exceed the budget.
inline bool follower_optimum_for_set(RegionSet winning, std::span<const double> gamma1,
                                     const Scenario& s, Allocation& out) {
  out.assign(s.K, 0.0);
  std::array<int, kMaxRegions> idx{};
  std::array<double, kMaxRegions> floor_at{}, weight{};
  int n = 0;
  double threshold_sum = 0.0, weight_sum = 0.0;
  for (int k = 0; k < s.K; ++k) {
    if (!winning.contains(k)) continue;
    idx[n] = k;
    floor_at[n] = s.delta2[k] * std::max(gamma1[k] / s.delta1[k] + s.pi, 1.0);
    weight[n] = std::sqrt(s.p2[k] * s.delta2[k]);
    threshold_sum += floor_at[n];
    weight_sum += weight[n];
    ++n;
  }
  if (threshold_sum > s.B2 + 1e-12) return false;
  if (n == 0) return true;
  const auto spend_at = [&](double level) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += std::max(floor_at[i], weight[i] * level);
    return total;
  };
  double lo = 0.0, hi = 0.0;
  if (weight_sum > 0.0) {
    hi = s.B2 / weight_sum;  // spend_at(hi) >= B2
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (spend_at(mid) <= s.B2 ? lo : hi) = mid;
    }
  }
  for (int i = 0; i < n; ++i) out[idx[i]] = std::max(floor_at[i], weight[i] * lo);
  return true;
}

struct BilevelResult {
  Allocation gamma1;
  Allocation gamma2;
  double u1 = 0.0;
  double u2 = 0.0;
  std::uint64_t points = 0;
};

// Follower reply to gamma1 by exhaustion over winning sets, selected for the
// leader per mode. Writes the chosen follower allocation and returns (u1, u2).
class ExhaustiveReply {
 public:
  explicit ExhaustiveReply(const Scenario& s)
      : s_(s), count_(std::size_t{1} << s.K), candidates_(count_), values_(count_),
        ok_(count_) {}

  std::pair<double, double> operator()(std::span<const double> gamma1, Mode mode,
                                       Allocation& reply) {
    double best = 0.0;
    for (std::size_t m = 0; m < count_; ++m) {
      const RegionSet winning(static_cast<RegionSet::mask_type>(m));
      ok_[m] = follower_optimum_for_set(winning, gamma1, s_, candidates_[m]);
      if (!ok_[m]) continue;
      values_[m] = follower_utility(candidates_[m], gamma1, s_);
      best = std::max(best, values_[m]);
    }
    double chosen_u1 = 0.0;
    bool have = false;
    for (std::size_t m = 0; m < count_; ++m) {
      if (!ok_[m] || values_[m] < best - 1e-9) continue;
      const double u1 = leader_utility(gamma1, candidates_[m], s_);
      const bool better =
          mode == Mode::kWeak ? u1 < chosen_u1 - 1e-12 : u1 > chosen_u1 + 1e-12;
      if (!have || better) {
        have = true;
        chosen_u1 = u1;
        reply = candidates_[m];
      }
    }
    return {chosen_u1, best};
  }

 private:
  const Scenario& s_;
  std::size_t count_;
  std::vector<Allocation> candidates_;
  std::vector<double> values_;
  std::vector<char> ok_;
};

inline std::pair<double, double> exhaustive_reply(std::span<const double> gamma1,
                                                  const Scenario& s, Mode mode,
                                                  Allocation& reply) {
  ExhaustiveReply r(s);
  return r(gamma1, mode, reply);
}

// Weak (pessimistic) or strong (optimistic) Stackelberg value by exhaustion
// over the leader's grid. Cost is |grid| * 2^K follower solves. With a
// leader_support the leader grid only covers those regions (the follower
// still answers over all of them).
inline BilevelResult oracle_stackelberg(const Scenario& s, const GridSpec& grid, Mode mode,
                                        std::optional<RegionSet> leader_support = {}) {
  const std::vector<int> support = leader_support ? leader_support->members()
                                                  : RegionSet::full(s.K).members();
  BilevelResult best;
  bool first = true;
  Allocation reply;
  Allocation g1(s.K, 0.0);
  ExhaustiveReply respond(s);
  const int n = static_cast<int>(support.size());
  for_each_grid_allocation(s.B1, n, grid, [&](const Allocation& point) {
    for (int i = 0; i < n; ++i) g1[support[i]] = point[i];
    ++best.points;
    const auto [u1, u2] = respond(g1, mode, reply);
    if (first || u1 > best.u1) {
      first = false;
      best.u1 = u1;
      best.u2 = u2;
      best.gamma1 = g1;
      best.gamma2 = reply;
    }
  });
  return best;
}

struct OracleReport {
  double solver_value = 0.0;
  double oracle_value = 0.0;
  double gap = 0.0;  // solver - oracle
  Allocation best_grid_point;
  double tolerance = 1e-3;
  bool pass = false;
};

// The solver may beat the grid; it may not trail it by more than tolerance.
inline OracleReport make_report(double solver_value, double oracle_value,
                                Allocation best_grid_point, double tolerance) {
  OracleReport r;
  r.solver_value = solver_value;
  r.oracle_value = oracle_value;
  r.gap = solver_value - oracle_value;
  r.best_grid_point = std::move(best_grid_point);
  r.tolerance = tolerance;
  r.pass = r.gap >= -tolerance;
  return r;
}

}  // namespace stackviral::oracle

#endif  // STACKVIRAL_ORACLE_HPP
