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

#include <gtest/gtest.h>

#include <random>

#include "stackviral/sis.hpp"
#include "support.hpp"

namespace sv = stackviral;

namespace {

sv::Scenario one_region(double d1, double d2) {
  return sv::Scenario{1, {1.0}, {1.0}, {d1}, {d2}, 1e-6, 10.0, 10.0};
}

TEST(Sis, LoneLeaderSettlesAtItsFixedPoint) {
  const auto s = one_region(0.5, 0.5);
  const auto tr = sv::simulate_bi_sis(0, 1.0, 0.0, s);
  EXPECT_NEAR(tr.terminal_x1(), 0.5, 1e-3);
  EXPECT_EQ(tr.terminal_x2(), 0.0);
  EXPECT_TRUE(tr.warmup_converged);
}

TEST(Sis, NoSpendNoMarket) {
  const auto tr = sv::simulate_bi_sis(0, 0.0, 0.0, one_region(0.5, 0.5), {.horizon = 50.0});
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    EXPECT_EQ(tr.x1[i], 0.0);
    EXPECT_EQ(tr.x2[i], 0.0);
  }
}

TEST(Sis, LargerRatioTakesTheRegion) {
  const auto s = one_region(0.5, 0.3);
  const auto tr = sv::simulate_bi_sis(0, 1.0, 0.9, s);
  EXPECT_NEAR(tr.terminal_x2(), 2.0 / 3.0, 1e-3);
  EXPECT_NEAR(tr.terminal_x1(), 0.0, 1e-3);
  const auto r = sv::steady_state_check(tr, 0, 1.0, 0.9, s, 1e-2);
  EXPECT_EQ(r.status, sv::CheckStatus::kPass);
  EXPECT_EQ(r.predicted.winner, sv::Winner::kFollower);
}

TEST(Sis, BothBelowThresholdDieOut) {
  const auto s = one_region(0.5, 0.5);
  const auto tr = sv::simulate_bi_sis(0, 0.3, 0.4, s);
  const auto r = sv::steady_state_check(tr, 0, 0.3, 0.4, s, 1e-2);
  EXPECT_EQ(r.status, sv::CheckStatus::kPass);
  EXPECT_NEAR(r.x1, 0.0, 1e-6);
  EXPECT_NEAR(r.x2, 0.0, 1e-6);
}

TEST(Sis, EqualRatiosAreExcluded) {
  const auto s = one_region(0.5, 0.25);
  const auto tr = sv::simulate_bi_sis(0, 1.0, 0.5, s, {.horizon = 100.0});
  EXPECT_EQ(sv::steady_state_check(tr, 0, 1.0, 0.5, s, 1e-2).status, sv::CheckStatus::kExcluded);
}

TEST(Sis, TimesIncreaseAndInjectionIsAtZero) {
  const auto tr = sv::simulate_bi_sis(0, 1.0, 0.9, one_region(0.5, 0.3), {.horizon = 100.0});
  for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_GE(tr.times[i], tr.times[i - 1]);
  EXPECT_LT(tr.times.front(), 0.0);
  EXPECT_NEAR(tr.times.back(), 100.0, 1e-9);
  EXPECT_EQ(tr.injection_time, 0.0);
}

TEST(Sis, DivergenceIsReported) {
  try {
    sv::simulate_bi_sis(0, 50.0, 40.0, one_region(0.5, 0.5), {.horizon = 100.0, .dt = 5.0});
    ADD_FAILURE() << "expected NonFiniteState";
  } catch (const sv::Error& e) {
    EXPECT_EQ(e.code(), sv::ErrorCode::kNonFiniteState);
  }
}

TEST(Sis, RejectsBadArguments) {
  const auto s = one_region(0.5, 0.5);
  EXPECT_THROW(sv::simulate_bi_sis(0, 1.0, 1.0, s, {.dt = 0.0}), sv::Error);
  EXPECT_THROW(sv::simulate_bi_sis(0, 1.0, 1.0, s, {.horizon = -1.0}), sv::Error);
  EXPECT_THROW(sv::simulate_bi_sis(0, 1.0, 1.0, s, {.seed = 1.0}), sv::Error);
  EXPECT_THROW(sv::simulate_bi_sis(1, 1.0, 1.0, s), sv::Error);
}

TEST(Sis, SharesStayOnTheSimplex) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> churn(0.1, 1.0), ratio(0.5, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = one_region(churn(rng), churn(rng));
    const double g1 = s.delta1[0] * ratio(rng), g2 = s.delta2[0] * ratio(rng);
    const auto tr = sv::simulate_bi_sis(0, g1, g2, s, {.horizon = 300.0, .sample_every = 0.01});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      EXPECT_GE(tr.x1[i], 0.0);
      EXPECT_GE(tr.x2[i], 0.0);
      EXPECT_LE(tr.x1[i] + tr.x2[i], 1.0 + 1e-9);
    }
  }
}

TEST(Sis, SingleFirmMatchesTheClosedForm) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> churn(0.1, 1.0), ratio(1.05, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double d = churn(rng);
    const double g = d * ratio(rng);
    const bool leader = trial % 2 == 0;
    const auto s = one_region(d, d);
    const auto tr = sv::simulate_bi_sis(0, leader ? g : 0.0, leader ? 0.0 : g, s,
                                        {.horizon = 200.0 / d, .dt = 0.01});
    const double x = leader ? tr.terminal_x1() : tr.terminal_x2();
    EXPECT_NEAR(x, 1.0 - d / g, 1e-3);
  }
}

}  // namespace
