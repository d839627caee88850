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

#ifndef STACKVIRAL_MODEL_HPP
#define STACKVIRAL_MODEL_HPP

#include <algorithm>
#include <span>

#include "stackviral/scenario.hpp"

namespace stackviral {

// Absolute slack on every spending/churn ratio comparison.
inline constexpr double kRatioTol = 1e-12;

// Weak: the follower breaks its ties against the leader. Strong: in favour.
enum class Mode { kWeak, kStrong };

inline const char* to_string(Mode m) { return m == Mode::kWeak ? "weak" : "strong"; }

enum class Winner { kLeader, kFollower, kNobody };

inline const char* to_string(Winner w) {
  switch (w) {
    case Winner::kLeader: return "Leader";
    case Winner::kFollower: return "Follower";
    case Winner::kNobody: return "Nobody";
  }
  return "?";
}

// Steady state of one region. At most one firm keeps subscribers.
struct RegionOutcome {
  Winner winner = Winner::kNobody;
  double x1_inf = 0.0;
  double x2_inf = 0.0;
  double s_inf = 1.0;
};

// Winner-takes-all steady state for region k (0-based). The leader keeps
// the region on ties; the follower must beat the leader's ratio by pi.
inline RegionOutcome region_outcome(int k, double g1, double g2, const Scenario& s) {
  const double d1 = s.delta1[k];
  const double d2 = s.delta2[k];
  const double r1 = g1 / d1;
  const double r2 = g2 / d2;
  RegionOutcome out;
  if (r1 >= std::max(r2, 1.0) - kRatioTol) {
    out.winner = Winner::kLeader;
    // r1 may sit a hair below 1 inside the tolerance band
    out.x1_inf = std::max(0.0, 1.0 - d1 / g1);
  } else if (r2 >= std::max(r1 + s.pi, 1.0) - kRatioTol) {
    out.winner = Winner::kFollower;
    out.x2_inf = std::max(0.0, 1.0 - d2 / g2);
  }
  out.s_inf = 1.0 - out.x1_inf - out.x2_inf;
  return out;
}

// Revenue of firm `who` in region k under spends (g1, g2).
inline double region_revenue(Firm who, int k, double g1, double g2, const Scenario& s) {
  const RegionOutcome o = region_outcome(k, g1, g2, s);
  return who == Firm::kLeader ? s.p1[k] * o.x1_inf : s.p2[k] * o.x2_inf;
}

inline double leader_utility(std::span<const double> gamma1, std::span<const double> gamma2,
                             const Scenario& s) {
  double u = 0.0;
  for (int k = 0; k < s.K; ++k) u += region_revenue(Firm::kLeader, k, gamma1[k], gamma2[k], s);
  return u;
}

inline double follower_utility(std::span<const double> gamma2, std::span<const double> gamma1,
                               const Scenario& s) {
  double u = 0.0;
  for (int k = 0; k < s.K; ++k)
    u += region_revenue(Firm::kFollower, k, gamma1[k], gamma2[k], s);
  return u;
}

}  // namespace stackviral

#endif  // STACKVIRAL_MODEL_HPP
