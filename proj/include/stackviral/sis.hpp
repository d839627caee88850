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

#ifndef STACKVIRAL_SIS_HPP
#define STACKVIRAL_SIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "stackviral/model.hpp"
#include "stackviral/scenario.hpp"

namespace stackviral {

// Sampled path of one region's market shares. Times before 0 belong to the
// leader-only warm-up; the follower enters at t = 0.
struct Trajectory {
  int region = 0;
  std::vector<double> times;
  std::vector<double> x1;
  std::vector<double> x2;
  double injection_time = 0.0;
  bool warmup_converged = true;

  double terminal_x1() const { return x1.empty() ? 0.0 : x1.back(); }
  double terminal_x2() const { return x2.empty() ? 0.0 : x2.back(); }
};

struct SimulationOptions {
  double horizon = 1e4;
  double dt = 0.01;
  double seed = 0.01;
  // Spacing of recorded samples, in time units.
  double sample_every = 1.0;
  // Distance from the leader's solo equilibrium that ends the warm-up.
  double warmup_tol = 1e-4;
};

namespace detail {

using SisState = std::array<double, 2>;

struct BiSis {
  double g1, g2, d1, d2;

  SisState rate(const SisState& x) const {
    const double free = 1.0 - x[0] - x[1];
    return {g1 * x[0] * free - d1 * x[0], g2 * x[1] * free - d2 * x[1]};
  }

  SisState step(const SisState& x, double h) const {
    const auto shift = [](const SisState& a, const SisState& b, double c) {
      return SisState{a[0] + c * b[0], a[1] + c * b[1]};
    };
    const SisState k1 = rate(x);
    const SisState k2 = rate(shift(x, k1, h / 2));
    const SisState k3 = rate(shift(x, k2, h / 2));
    const SisState k4 = rate(shift(x, k3, h));
    return {x[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            x[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
  }
};

inline void require_finite(const SisState& x, double t) {
  if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[0]) > 1e6 ||
      std::abs(x[1]) > 1e6)
    throw Error(ErrorCode::kNonFiniteState,
                "integration diverged at t=" + std::to_string(t) + "; reduce dt");
}

}  // namespace detail

// Fully mixed two-virus SIS in region k:
//   x1' = g1 x1 (1 - x1 - x2) - d1 x1,   x2' = g2 x2 (1 - x1 - x2) - d2 x2.
// The leader is seeded first and runs alone until it is within warmup_tol of
// 1 - d1/g1 (or for at most one horizon), then the follower is seeded and
// both run for `horizon`. A firm with zero spend is never seeded.
inline Trajectory simulate_bi_sis(int k, double g1, double g2, const Scenario& s,
                                  const SimulationOptions& opt = {}) {
  if (k < 0 || k >= s.K) throw Error(ErrorCode::kInvalidArgument, "region index out of range");
  if (!(opt.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  if (!(opt.horizon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "horizon must be > 0");
  if (!(opt.seed > 0.0 && opt.seed < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "seed level must lie in (0,1)");
  if (g1 < 0.0 || g2 < 0.0) throw Error(ErrorCode::kInvalidArgument, "spend must be >= 0");

  const detail::BiSis sys{g1, g2, s.delta1[k], s.delta2[k]};
  const auto steps = static_cast<long long>(std::ceil(opt.horizon / opt.dt - 1e-9));
  const auto stride = std::max(1LL, std::llround(opt.sample_every / opt.dt));

  Trajectory tr;
  tr.region = k;
  std::vector<std::array<double, 3>> warmup;
  detail::SisState x{g1 > 0.0 ? opt.seed : 0.0, 0.0};
  const double solo = g1 > 0.0 ? std::max(0.0, 1.0 - s.delta1[k] / g1) : 0.0;

  long long n = 0;
  warmup.push_back({0.0, x[0], x[1]});
  while (std::abs(x[0] - solo) >= opt.warmup_tol && n < steps) {
    x = sys.step(x, opt.dt);
    ++n;
    detail::require_finite(x, n * opt.dt);
    if (n % stride == 0) warmup.push_back({n * opt.dt, x[0], x[1]});
  }
  tr.warmup_converged = std::abs(x[0] - solo) < opt.warmup_tol;
  const double shift = n * opt.dt;
  if (warmup.back()[0] != shift) warmup.push_back({shift, x[0], x[1]});
  for (const auto& w : warmup) {
    tr.times.push_back(w[0] - shift);
    tr.x1.push_back(w[1]);
    tr.x2.push_back(w[2]);
  }
  tr.injection_time = 0.0;

  if (g2 > 0.0) {
    x[1] = std::min(opt.seed, 1.0 - x[0]);
    tr.times.push_back(0.0);
    tr.x1.push_back(x[0]);
    tr.x2.push_back(x[1]);
  }
  for (long long i = 1; i <= steps; ++i) {
    x = sys.step(x, opt.dt);
    detail::require_finite(x, i * opt.dt);
    if (i % stride == 0 || i == steps) {
      tr.times.push_back(i * opt.dt);
      tr.x1.push_back(x[0]);
      tr.x2.push_back(x[1]);
    }
  }
  return tr;
}

enum class CheckStatus { kPass, kFail, kExcluded };

inline const char* to_string(CheckStatus c) {
  switch (c) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kExcluded: return "near-degenerate, excluded";
  }
  return "?";
}

struct SteadyStateReport {
  CheckStatus status = CheckStatus::kPass;
  RegionOutcome predicted;
  double x1 = 0.0;
  double x2 = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
};

// Relative gap between the two spend ratios below which the steady state is
// too close to a tie for the winner-takes-all map to be a fair prediction.
inline constexpr double kDegenerateRatioGap = 0.05;

inline SteadyStateReport steady_state_check(const Trajectory& tr, int k, double g1, double g2,
                                            const Scenario& s, double tol) {
  SteadyStateReport r;
  r.tolerance = tol;
  r.predicted = region_outcome(k, g1, g2, s);
  r.x1 = tr.terminal_x1();
  r.x2 = tr.terminal_x2();
  r.error = std::max(std::abs(r.x1 - r.predicted.x1_inf), std::abs(r.x2 - r.predicted.x2_inf));
  const double r1 = g1 / s.delta1[k];
  const double r2 = g2 / s.delta2[k];
  if (std::abs(r1 - r2) < kDegenerateRatioGap * std::max(r1, r2))
    r.status = CheckStatus::kExcluded;
  else
    r.status = r.error <= tol ? CheckStatus::kPass : CheckStatus::kFail;
  return r;
}

}  // namespace stackviral

#endif  // STACKVIRAL_SIS_HPP
