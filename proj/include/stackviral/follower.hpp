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

#ifndef STACKVIRAL_FOLLOWER_HPP
#define STACKVIRAL_FOLLOWER_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "stackviral/model.hpp"
#include "stackviral/region_set.hpp"
#include "stackviral/scenario.hpp"

// Follower best response.
//
// For a fixed leader allocation the follower picks a winning set K2 and,
// inside it, the set of interior regions whose spend exceeds the entry cost.
// Boundary regions (K2 minus the interior set) are bought at exactly their
// entry cost, and the residual budget is split over the interior regions in
// proportion to sqrt(p2k * delta2k). Enumerating every (K2, interior) pair,
// at most 3^K of them, yields the exact maximizer set.

namespace stackviral {

// Interior spend must clear the entry cost by this much.
inline constexpr double kStrictnessTol = 1e-9;
// Bundles within this much of the best value are all maximizers.
inline constexpr double kUtilityTieTol = 1e-9;
// Slack when comparing summed entry costs to the budget.
inline constexpr double kBudgetSlack = 1e-12;

enum class Selection { kPessimistic, kOptimistic };

struct FollowerSolution {
  RegionSet winning_set;   // K2
  RegionSet interior_set;  // subset of K2 spending strictly above entry cost
  Allocation allocation;
  double utility = 0.0;
  // Budget multiplier; 0 when there is no interior region to pin it down.
  double lambda = 0.0;
};

// Cheapest follower spend that captures region k against leader spend g1k:
// delta2k * max(g1k / delta1k + pi, 1).
inline double entry_cost(int k, double g1k, const Scenario& s) {
  return s.delta2[k] * std::max(g1k / s.delta1[k] + s.pi, 1.0);
}

inline double bundle_entry_cost(RegionSet winning, std::span<const double> gamma1,
                                const Scenario& s) {
  double total = 0.0;
  for (int k : winning.members()) total += entry_cost(k, gamma1[k], s);
  return total;
}

// True iff the follower can afford every entry cost in `winning`.
inline bool bundle_feasible(RegionSet winning, std::span<const double> gamma1,
                            const Scenario& s) {
  return bundle_entry_cost(winning, gamma1, s) <= s.B2 + kBudgetSlack;
}

enum class BundleStatus { kOk, kInteriorInfeasible, kEmptyInteriorWithResidual };

struct BundleCandidate {
  BundleStatus status = BundleStatus::kOk;
  Allocation allocation;
  double lambda = 0.0;
};

// Closed-form allocation for a (winning, interior) pair. Rejected when an
// interior region does not clear its entry cost, when no budget is left for
// the interior, or when the interior is empty while budget is left over
// (a positive multiplier forces full spend).
inline BundleCandidate interior_allocation(RegionSet winning, RegionSet interior,
                                           std::span<const double> gamma1, const Scenario& s) {
  BundleCandidate out;
  out.allocation.assign(s.K, 0.0);
  double residual = s.B2;
  for (int k : (winning - interior).members()) {
    out.allocation[k] = entry_cost(k, gamma1[k], s);
    residual -= out.allocation[k];
  }
  if (interior.empty()) {
    if (!winning.empty() && residual > kBudgetSlack) out.status = BundleStatus::kEmptyInteriorWithResidual;
    if (residual < -kBudgetSlack) out.status = BundleStatus::kInteriorInfeasible;
    return out;
  }
  if (residual <= 0.0) {
    out.status = BundleStatus::kInteriorInfeasible;
    return out;
  }
  double weight_sum = 0.0;
  for (int k : interior.members()) weight_sum += std::sqrt(s.p2[k] * s.delta2[k]);
  for (int k : interior.members()) {
    const double g = std::sqrt(s.p2[k] * s.delta2[k]) * residual / weight_sum;
    if (!(g >= entry_cost(k, gamma1[k], s) + kStrictnessTol)) {
      out.status = BundleStatus::kInteriorInfeasible;
      return out;
    }
    out.allocation[k] = g;
  }
  out.lambda = (weight_sum / residual) * (weight_sum / residual);
  return out;
}

// Follower revenue of a (winning, interior) pair in closed form. Boundary
// regions earn p2k (1 - 1/max(g1k/delta1k + pi, 1)); interior regions earn
// p2k - sqrt(p2k delta2k) W / R with W the interior weight sum and R the
// budget left after boundary purchases. Callers must have checked the pair
// with interior_allocation first.
inline double bundle_value(RegionSet winning, RegionSet interior,
                           std::span<const double> gamma1, const Scenario& s) {
  double value = 0.0;
  double residual = s.B2;
  for (int k : (winning - interior).members()) {
    const double level = std::max(gamma1[k] / s.delta1[k] + s.pi, 1.0);
    value += s.p2[k] * (1.0 - 1.0 / level);
    residual -= s.delta2[k] * level;
  }
  if (interior.empty()) return value;
  double weight_sum = 0.0;
  for (int k : interior.members()) weight_sum += std::sqrt(s.p2[k] * s.delta2[k]);
  for (int k : interior.members())
    value += s.p2[k] - std::sqrt(s.p2[k] * s.delta2[k]) * weight_sum / residual;
  return value;
}

// Every follower allocation attaining the best response value (within
// 1e-9), in enumeration order: winning sets by increasing bitmask, then
// interior sets by increasing bitmask. Regions with zero follower revenue
// are never part of a winning set. The empty bundle is always a candidate.
inline std::vector<FollowerSolution> best_response_set(std::span<const double> gamma1,
                                                       const Scenario& s) {
  // Per-region data is fixed for a given gamma1; the scoring loop below
  // repeats interior_allocation/bundle_value without building vectors.
  std::vector<double> cost(s.K), level(s.K), weight(s.K);
  RegionSet useful;
  for (int k = 0; k < s.K; ++k) {
    level[k] = std::max(gamma1[k] / s.delta1[k] + s.pi, 1.0);
    cost[k] = s.delta2[k] * level[k];
    weight[k] = std::sqrt(s.p2[k] * s.delta2[k]);
    if (s.p2[k] > 0.0) useful = useful.with(k);
  }

  struct Scored {
    RegionSet winning, interior;
    double value;
  };
  std::vector<Scored> feasible;
  double best = 0.0;
  for_each_subset(useful, [&](RegionSet winning) {
    double total_cost = 0.0;
    for_each_member(winning, [&](int k) { total_cost += cost[k]; });
    if (total_cost > s.B2 + kBudgetSlack) return;
    for_each_subset(winning, [&](RegionSet interior) {
      double residual = s.B2;
      double value = 0.0;
      for_each_member(winning - interior, [&](int k) {
        residual -= cost[k];
        value += s.p2[k] * (1.0 - 1.0 / level[k]);
      });
      if (interior.empty()) {
        if (!winning.empty() && residual > kBudgetSlack) return;
      } else {
        if (residual <= 0.0) return;
        double weight_sum = 0.0;
        for_each_member(interior, [&](int k) { weight_sum += weight[k]; });
        bool strict = true;
        for_each_member(interior, [&](int k) {
          strict = strict && weight[k] * residual / weight_sum >= cost[k] + kStrictnessTol;
          value += s.p2[k] - weight[k] * weight_sum / residual;
        });
        if (!strict) return;
      }
      feasible.push_back({winning, interior, value});
      best = std::max(best, value);
    });
  });

  std::vector<FollowerSolution> out;
  for (const Scored& c : feasible) {
    if (c.value < best - kUtilityTieTol) continue;
    BundleCandidate alloc = interior_allocation(c.winning, c.interior, gamma1, s);
    out.push_back({c.winning, c.interior, std::move(alloc.allocation),
                   bundle_value(c.winning, c.interior, gamma1, s), alloc.lambda});
  }
  return out;
}

// Picks the maximizer that is worst (pessimistic) or best (optimistic) for
// the leader. Leader-utility ties keep the earliest element, i.e. the
// smallest winning-set bitmask and then the smallest interior bitmask.
inline const FollowerSolution& select_br(std::span<const FollowerSolution> brset,
                                         Selection mode, std::span<const double> gamma1,
                                         const Scenario& s) {
  if (brset.empty()) throw Error(ErrorCode::kInvalidArgument, "empty best-response set");
  std::size_t chosen = 0;
  double chosen_u1 = leader_utility(gamma1, brset[0].allocation, s);
  for (std::size_t i = 1; i < brset.size(); ++i) {
    const double u1 = leader_utility(gamma1, brset[i].allocation, s);
    const bool better = mode == Selection::kPessimistic ? u1 < chosen_u1 - kRatioTol
                                                        : u1 > chosen_u1 + kRatioTol;
    if (better) {
      chosen = i;
      chosen_u1 = u1;
    }
  }
  return brset[chosen];
}

// Selected best response under `mode`.
inline FollowerSolution best_response(std::span<const double> gamma1, const Scenario& s,
                                      Selection mode) {
  const std::vector<FollowerSolution> brset = best_response_set(gamma1, s);
  return select_br(brset, mode, gamma1, s);
}

// Optimal follower revenue against gamma1.
inline double best_response_value(std::span<const double> gamma1, const Scenario& s) {
  double best = 0.0;
  for (const FollowerSolution& f : best_response_set(gamma1, s)) best = std::max(best, f.utility);
  return best;
}

}  // namespace stackviral

#endif  // STACKVIRAL_FOLLOWER_HPP
