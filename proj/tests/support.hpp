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

#ifndef STACKVIRAL_TESTS_SUPPORT_HPP
#define STACKVIRAL_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "stackviral/scenario.hpp"

namespace stackviral::testing {

// The five-region game used throughout the tests, with budgets (b1, b2).
inline Scenario s5(double b1 = 0.6, double b2 = 0.6) {
  Scenario s;
  s.K = 5;
  s.p1 = {1, 2, 3, 4, 5};
  s.p2 = {2, 3, 1, 5, 4};
  s.delta1 = {0.5, 0.4, 0.3, 0.2, 0.1};
  s.delta2 = {0.1, 0.2, 0.3, 0.4, 0.5};
  s.pi = 1e-6;
  s.B1 = b1;
  s.B2 = b2;
  return s;
}

// Churn in [0.1, 1], revenue in [0.5, 5], budgets in [0.5, 5], pi = 1e-6.
inline Scenario random_scenario(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> churn(0.1, 1.0), revenue(0.5, 5.0), budget(0.5, 5.0);
  Scenario s;
  s.K = K;
  s.pi = 1e-6;
  for (int k = 0; k < K; ++k) {
    s.p1.push_back(revenue(rng));
    s.p2.push_back(revenue(rng));
    s.delta1.push_back(churn(rng));
    s.delta2.push_back(churn(rng));
  }
  s.B1 = budget(rng);
  s.B2 = budget(rng);
  return s;
}

// Uniform point of {x >= 0, sum x <= budget}.
inline Allocation random_allocation(std::mt19937_64& rng, int K, double budget) {
  std::exponential_distribution<double> e(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Allocation g(K);
  double sum = 0.0;
  for (double& x : g) sum += (x = e(rng));
  const double radius = budget * std::pow(u(rng), 1.0 / K);
  for (double& x : g) x *= radius / sum;
  return g;
}

}  // namespace stackviral::testing

#endif  // STACKVIRAL_TESTS_SUPPORT_HPP
