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

#include <cmath>
#include <numeric>
#include <random>

#include "stackviral/follower.hpp"
#include "stackviral/oracle.hpp"
#include "support.hpp"

namespace sv = stackviral;
using sv::RegionSet;
using sv::testing::s5;

namespace {

const sv::Allocation kIdle(5, 0.0);

TEST(EntryCost, Examples) {
  const auto s = s5();
  EXPECT_DOUBLE_EQ(sv::entry_cost(3, 0.0, s), 0.4);
  EXPECT_NEAR(sv::entry_cost(0, 1.0, s), 0.2000001, 1e-15);
  EXPECT_NEAR(sv::entry_cost(4, 0.2649, s), 1.32450, 1e-5);
}

TEST(BundleFeasible, Examples) {
  EXPECT_FALSE(sv::bundle_feasible(RegionSet::of({0, 1, 3}), kIdle, s5(0.6, 0.6)));
  EXPECT_TRUE(sv::bundle_feasible(RegionSet(), kIdle, s5(0.6, 0.0)));
  EXPECT_TRUE(sv::bundle_feasible(RegionSet::of({3, 4}), kIdle, s5(0.6, 5.0)));
}

TEST(InteriorAllocation, EqualWeightsSplitEvenly) {
  const auto c = sv::interior_allocation(RegionSet::of({3, 4}), RegionSet::of({3, 4}), kIdle, s5(5, 5));
  ASSERT_EQ(c.status, sv::BundleStatus::kOk);
  EXPECT_NEAR(c.allocation[3], 2.5, 1e-12);
  EXPECT_NEAR(c.allocation[4], 2.5, 1e-12);
  EXPECT_EQ(c.allocation[0], 0.0);
}

TEST(InteriorAllocation, SplitsInProportionToRootWeights) {
  const auto c = sv::interior_allocation(RegionSet::of({0, 1}), RegionSet::of({0, 1}), kIdle, s5());
  ASSERT_EQ(c.status, sv::BundleStatus::kOk);
  const double w1 = std::sqrt(0.2), w2 = std::sqrt(0.6);
  EXPECT_NEAR(c.allocation[0], 0.6 * w1 / (w1 + w2), 1e-12);
  EXPECT_NEAR(c.allocation[1], 0.6 * w2 / (w1 + w2), 1e-12);
  EXPECT_NEAR(c.allocation[0], 0.219615, 1e-6);
  EXPECT_NEAR(c.allocation[1], 0.380385, 1e-6);
}

TEST(InteriorAllocation, Rejections) {
  const auto s = s5();
  EXPECT_EQ(sv::interior_allocation(RegionSet::of({3, 4}), RegionSet::of({3, 4}), kIdle, s).status,
            sv::BundleStatus::kInteriorInfeasible);
  // boundary purchase of region 1 leaves 0.5 unspent
  EXPECT_EQ(sv::interior_allocation(RegionSet::of({0}), RegionSet(), kIdle, s).status,
            sv::BundleStatus::kEmptyInteriorWithResidual);
  // boundary purchases exhaust the budget before the interior gets anything
  EXPECT_EQ(sv::interior_allocation(RegionSet::of({3, 4}), RegionSet::of({4}), kIdle, s5(0.6, 0.4))
                .status,
            sv::BundleStatus::kInteriorInfeasible);
}

TEST(BundleValue, Examples) {
  EXPECT_NEAR(sv::bundle_value(RegionSet::of({0, 1}), RegionSet::of({0, 1}), kIdle, s5()), 2.51196613,
              1e-8);
  // all-boundary bundle bought exactly at entry cost earns nothing
  const auto s = s5(0.6, 0.4);
  const auto c = sv::interior_allocation(RegionSet::of({3}), RegionSet(), kIdle, s);
  ASSERT_EQ(c.status, sv::BundleStatus::kOk);
  EXPECT_EQ(sv::bundle_value(RegionSet::of({3}), RegionSet(), kIdle, s), 0.0);
  EXPECT_EQ(sv::bundle_value(RegionSet(), RegionSet(), kIdle, s5()), 0.0);
}

TEST(BestResponseSet, SmallBudgetPicksRegionsOneAndTwo) {
  const auto s = s5();
  const auto br = sv::best_response_set(kIdle, s);
  ASSERT_EQ(br.size(), 1u);
  EXPECT_EQ(br[0].winning_set, RegionSet::of({0, 1}));
  EXPECT_EQ(br[0].interior_set, RegionSet::of({0, 1}));
  EXPECT_NEAR(br[0].utility, 2.51196613, 1e-8);
  // a 0.001 step over all five regions is beyond the grid cap; the chosen
  // regions are checked at that step and the full game at 0.01
  const auto chosen = sv::restrict_regions(s, {0, 1});
  const auto fine = sv::oracle::oracle_follower_br(std::vector(2, 0.0), chosen, {0.001});
  EXPECT_GE(br[0].utility, fine.utility);
  EXPECT_NEAR(br[0].utility, fine.utility, 1e-3);
  const auto coarse = sv::oracle::oracle_follower_br(kIdle, s, {0.01});
  EXPECT_GE(br[0].utility, coarse.utility);
  EXPECT_NEAR(br[0].utility, coarse.utility, 1e-3);
}

TEST(BestResponseSet, ZeroBudgetLeavesOnlyTheEmptyBundle) {
  const auto br = sv::best_response_set(kIdle, s5(0.6, 0.0));
  ASSERT_EQ(br.size(), 1u);
  EXPECT_TRUE(br[0].winning_set.empty());
  EXPECT_EQ(br[0].utility, 0.0);
}

TEST(BestResponseSet, LargeBudgetTakesEveryRegion) {
  const auto s = s5(0.6, 5.0);
  const auto br = sv::best_response_set(kIdle, s);
  ASSERT_EQ(br.size(), 1u);
  EXPECT_EQ(br[0].winning_set, RegionSet::full(5));
  EXPECT_NEAR(br[0].utility, 10.771752865, 1e-8);
  EXPECT_GT(br[0].utility, 7.4);
  // independent exact reply over winning sets
  double best = 0.0;
  sv::Allocation g2;
  sv::for_each_subset(RegionSet::full(5), [&](RegionSet w) {
    if (sv::oracle::follower_optimum_for_set(w, kIdle, s, g2))
      best = std::max(best, sv::follower_utility(g2, kIdle, s));
  });
  EXPECT_NEAR(br[0].utility, best, 1e-9);
}

TEST(SelectBr, PicksByLeaderUtility) {
  const auto s = s5();
  const sv::Allocation g1{1.0, 0.0, 0.0, 0.0, 0.0};
  std::vector<sv::FollowerSolution> brset(2);
  brset[0].winning_set = RegionSet::of({0});
  brset[0].allocation = {0.3, 0.0, 0.0, 0.0, 0.0};  // contests region 1
  brset[1].winning_set = RegionSet::of({1});
  brset[1].allocation = {0.0, 0.3, 0.0, 0.0, 0.0};
  EXPECT_EQ(&sv::select_br(brset, sv::Selection::kPessimistic, g1, s), &brset[0]);
  EXPECT_EQ(&sv::select_br(brset, sv::Selection::kOptimistic, g1, s), &brset[1]);
  EXPECT_EQ(&sv::select_br(std::span(brset).first(1), sv::Selection::kOptimistic, g1, s), &brset[0]);
}

TEST(SelectBr, EqualLeaderUtilityKeepsTheFirst) {
  const auto s = s5();
  std::vector<sv::FollowerSolution> brset(2);
  brset[0].allocation = {0.3, 0.0, 0.0, 0.0, 0.0};
  brset[1].allocation = {0.0, 0.3, 0.0, 0.0, 0.0};
  EXPECT_EQ(&sv::select_br(brset, sv::Selection::kPessimistic, kIdle, s), &brset[0]);
  EXPECT_EQ(&sv::select_br(brset, sv::Selection::kOptimistic, kIdle, s), &brset[0]);
}

class RandomBestResponse : public ::testing::Test {
 protected:
  std::mt19937_64 rng{29};
};

TEST_F(RandomBestResponse, KktStructure) {
  for (int trial = 0; trial < 400; ++trial) {
    const auto s = sv::testing::random_scenario(rng, 1 + trial % 4);
    const auto g1 = sv::testing::random_allocation(rng, s.K, s.B1);
    for (const auto& f : sv::best_response_set(g1, s)) {
      EXPECT_TRUE(f.interior_set.is_subset_of(f.winning_set));
      EXPECT_NEAR(sv::follower_utility(f.allocation, g1, s), f.utility, 1e-9);
      double spent = 0.0;
      for (int k = 0; k < s.K; ++k) {
        spent += f.allocation[k];
        const double cost = sv::entry_cost(k, g1[k], s);
        if (!f.winning_set.contains(k)) {
          EXPECT_EQ(f.allocation[k], 0.0);
        } else if (f.interior_set.contains(k)) {
          EXPECT_GE(f.allocation[k], cost + sv::kStrictnessTol);
          EXPECT_NEAR(f.allocation[k] * std::sqrt(f.lambda), std::sqrt(s.p2[k] * s.delta2[k]), 1e-9);
        } else {
          EXPECT_EQ(f.allocation[k], cost);
        }
      }
      if (!f.winning_set.empty()) {
        EXPECT_NEAR(spent, s.B2, 1e-9);
      }
    }
  }
}

TEST_F(RandomBestResponse, DominatesTheGrid) {
  for (int trial = 0; trial < 24; ++trial) {
    const auto s = sv::testing::random_scenario(rng, 1 + trial % 3);
    const auto g1 = sv::testing::random_allocation(rng, s.K, s.B1);
    const double value = sv::best_response_value(g1, s);
    const auto grid = sv::oracle::oracle_follower_br(g1, s, {0.001 * s.B2});
    EXPECT_GE(value, grid.utility - 1e-12);
    EXPECT_LE(value - grid.utility, 1e-3) << "trial " << trial;
  }
}

TEST_F(RandomBestResponse, MoreLeaderSpendNeverHelpsTheFollower) {
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = sv::testing::random_scenario(rng, 1 + trial % 4);
    auto g1 = sv::testing::random_allocation(rng, s.K, s.B1);
    const double before = sv::best_response_value(g1, s);
    g1[trial % s.K] += bump(rng);
    EXPECT_LE(sv::best_response_value(g1, s), before + 1e-9);
  }
}

TEST_F(RandomBestResponse, ScalingRevenueKeepsTheChoice) {
  for (int trial = 0; trial < 300; ++trial) {
    auto s = sv::testing::random_scenario(rng, 1 + trial % 4);
    const auto g1 = sv::testing::random_allocation(rng, s.K, s.B1);
    const auto mode = trial % 2 ? sv::Selection::kOptimistic : sv::Selection::kPessimistic;
    const auto a = sv::best_response(g1, s, mode);
    for (double& p : s.p2) p *= 3.5;
    const auto b = sv::best_response(g1, s, mode);
    EXPECT_EQ(a.winning_set, b.winning_set);
    EXPECT_EQ(a.interior_set, b.interior_set);
    for (int k = 0; k < s.K; ++k) EXPECT_NEAR(a.allocation[k], b.allocation[k], 1e-12);
  }
}

}  // namespace
