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

#ifndef STACKVIRAL_STACKELBERG_HPP
#define STACKVIRAL_STACKELBERG_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "stackviral/follower.hpp"
#include "stackviral/leader.hpp"
#include "stackviral/model.hpp"
#include "stackviral/region_set.hpp"
#include "stackviral/scenario.hpp"

namespace stackviral {

// Follower reply in the all-interior closed form: the winning set maximizes
// sum_{k in K2} p2k - (sum_{k in K2} sqrt(p2k delta2k))^2 / B2 over sets
// disjoint from the leader's, and the budget is split in proportion to
// sqrt(p2k delta2k). Entry costs are not checked here.
struct ClosedFormReply {
  RegionSet winning_set;
  Allocation gamma2;
  double utility = 0.0;
};

inline ClosedFormReply follower_equilibrium_reply(RegionSet leader_set, const Scenario& s) {
  ClosedFormReply best;
  best.gamma2.assign(s.K, 0.0);
  if (!(s.B2 > 0.0)) return best;
  RegionSet open;
  for (int k = 0; k < s.K; ++k)
    if (!leader_set.contains(k) && s.p2[k] > 0.0) open = open.with(k);
  for_each_subset(open, [&](RegionSet K2) {
    double p_sum = 0.0, w_sum = 0.0;
    for (int k : K2.members()) {
      p_sum += s.p2[k];
      w_sum += std::sqrt(s.p2[k] * s.delta2[k]);
    }
    const double v = p_sum - w_sum * w_sum / s.B2;
    if (v > best.utility + 1e-12) {
      best.utility = v;
      best.winning_set = K2;
    }
  });
  double w_sum = 0.0;
  for (int k : best.winning_set.members()) w_sum += std::sqrt(s.p2[k] * s.delta2[k]);
  for (int k : best.winning_set.members())
    best.gamma2[k] = std::sqrt(s.p2[k] * s.delta2[k]) * s.B2 / w_sum;
  return best;
}

inline constexpr double kReplyAgreementTol = 1e-9;

struct ReplyCheck {
  bool agrees = true;
  ClosedFormReply closed_form;
  double general_utility = 0.0;
  std::string message;
};

// Compares the closed-form reply with the general best response utility.
inline ReplyCheck compare_reply(const ClosedFormReply& closed, double general_utility) {
  ReplyCheck c;
  c.closed_form = closed;
  c.general_utility = general_utility;
  c.agrees = std::abs(closed.utility - general_utility) <= kReplyAgreementTol;
  if (!c.agrees) {
    c.message = "closed-form reply " + closed.winning_set.to_string() + " u2=" +
                std::to_string(closed.utility) + " vs general best response u2=" +
                std::to_string(general_utility);
  }
  return c;
}

// Throws DisagreementWithGeneralBR unless the two replies agree.
inline void require_reply_agreement(const ClosedFormReply& closed, double general_utility) {
  const ReplyCheck c = compare_reply(closed, general_utility);
  if (!c.agrees) throw Error(ErrorCode::kDisagreementWithGeneralBR, c.message);
}

struct StackelbergOptions {
  double tol = 1e-6;
  int region_cap = kDefaultRegionCap;
};

struct StackelbergOutcome {
  Mode mode = Mode::kWeak;
  RegionSet K1;
  Allocation gamma1;
  double u1 = 0.0;
  RegionSet K2;
  RegionSet K2_interior;
  Allocation gamma2;
  double u2 = 0.0;
  // Indexed by K1 bitmask; -1 marks subsets with no deterring allocation.
  std::vector<double> per_subset_values;
  std::vector<int> per_subset_phase;
  ReplyCheck reply_check;
};

inline constexpr double kInfeasibleSentinel = -1.0;

// Enumerates every leader winning set, keeps the best subproblem value
// (smallest bitmask on ties within 1e-9), then computes the follower's
// reply with the general best response and cross-checks the closed form.
inline StackelbergOutcome solve_stackelberg(const Scenario& s, Mode mode,
                                            const StackelbergOptions& opt = {}) {
  if (s.K > opt.region_cap)
    throw Error(ErrorCode::kTooManyRegions, "K=" + std::to_string(s.K) + " exceeds the cap of " +
                                                std::to_string(opt.region_cap));
  StackelbergOutcome out;
  out.mode = mode;
  const std::size_t subsets = std::size_t{1} << s.K;
  out.per_subset_values.assign(subsets, kInfeasibleSentinel);
  out.per_subset_phase.assign(subsets, -1);
  double best = -1.0;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    const RegionSet K1(static_cast<RegionSet::mask_type>(mask));
    const auto sub = leader_subproblem(K1, s, mode, opt.tol);
    if (!sub) continue;
    out.per_subset_values[mask] = sub->value;
    out.per_subset_phase[mask] = sub->phase;
    if (sub->value > best + 1e-9) {
      best = sub->value;
      out.K1 = K1;
      out.gamma1 = sub->gamma1;
    }
  }
  const std::vector<FollowerSolution> brset = best_response_set(out.gamma1, s);
  const FollowerSolution& reply = select_br(brset, selection_for(mode), out.gamma1, s);
  out.K2 = reply.winning_set;
  out.K2_interior = reply.interior_set;
  out.gamma2 = reply.allocation;
  out.u2 = reply.utility;
  out.u1 = leader_utility(out.gamma1, out.gamma2, s);
  out.reply_check = compare_reply(follower_equilibrium_reply(out.K1, s), out.u2);
  return out;
}

}  // namespace stackviral

#endif  // STACKVIRAL_STACKELBERG_HPP
