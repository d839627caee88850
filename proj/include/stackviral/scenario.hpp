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

#ifndef STACKVIRAL_SCENARIO_HPP
#define STACKVIRAL_SCENARIO_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackviral {

enum class ErrorCode {
  kNonPositiveChurn,
  kNegativeRevenue,
  kNegativeBudget,
  kNonPositivePi,
  kLengthMismatch,
  kTooManyRegions,
  kInvalidAllocation,
  kParseError,
  kGridTooLarge,
  kDisagreementWithGeneralBR,
  kNonFiniteState,
  kInvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPositiveChurn: return "NonPositiveChurn";
    case ErrorCode::kNegativeRevenue: return "NegativeRevenue";
    case ErrorCode::kNegativeBudget: return "NegativeBudget";
    case ErrorCode::kNonPositivePi: return "NonPositivePi";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooManyRegions: return "TooManyRegions";
    case ErrorCode::kInvalidAllocation: return "InvalidAllocation";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kGridTooLarge: return "GridTooLarge";
    case ErrorCode::kDisagreementWithGeneralBR: return "DisagreementWithGeneralBR";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Per-region spending of one firm, in budget units.
using Allocation = std::vector<double>;

enum class Firm { kLeader, kFollower };

// Hard ceiling on region count; the 3^K follower enumeration makes anything
// beyond this impractical.
inline constexpr int kMaxRegions = 20;
// Default ceiling enforced by the solver entry points.
inline constexpr int kDefaultRegionCap = 16;

// Game parameters. Index 0 of every vector is region 1.
struct Scenario {
  int K = 0;
  std::vector<double> p1, p2;          // revenue weights
  std::vector<double> delta1, delta2;  // churn rates
  double pi = 0.0;                     // barrier to entry
  double B1 = 0.0, B2 = 0.0;           // budgets

  const std::vector<double>& revenue(Firm f) const { return f == Firm::kLeader ? p1 : p2; }
  const std::vector<double>& churn(Firm f) const { return f == Firm::kLeader ? delta1 : delta2; }
  double budget(Firm f) const { return f == Firm::kLeader ? B1 : B2; }
};

// Checks the scenario invariants and returns it unchanged, or throws Error.
inline Scenario validate_scenario(Scenario s) {
  if (s.K < 1) throw Error(ErrorCode::kLengthMismatch, "K must be at least 1");
  if (s.K > kMaxRegions)
    throw Error(ErrorCode::kTooManyRegions,
                "K=" + std::to_string(s.K) + " exceeds " + std::to_string(kMaxRegions));
  const auto check_len = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != s.K)
      throw Error(ErrorCode::kLengthMismatch, std::string(name) + " has length " +
                                                  std::to_string(v.size()) + ", expected K=" +
                                                  std::to_string(s.K));
  };
  check_len(s.p1, "p1");
  check_len(s.p2, "p2");
  check_len(s.delta1, "delta1");
  check_len(s.delta2, "delta2");
  for (int k = 0; k < s.K; ++k) {
    if (!(s.p1[k] >= 0.0) || !(s.p2[k] >= 0.0) || !std::isfinite(s.p1[k]) ||
        !std::isfinite(s.p2[k]))
      throw Error(ErrorCode::kNegativeRevenue, "revenue weight of region " +
                                                   std::to_string(k + 1) + " is negative");
    if (!(s.delta1[k] > 0.0) || !(s.delta2[k] > 0.0) || !std::isfinite(s.delta1[k]) ||
        !std::isfinite(s.delta2[k]))
      throw Error(ErrorCode::kNonPositiveChurn,
                  "churn rate of region " + std::to_string(k + 1) + " must be > 0");
  }
  if (!(s.pi > 0.0) || !std::isfinite(s.pi))
    throw Error(ErrorCode::kNonPositivePi, "barrier to entry must be > 0");
  if (!(s.B1 >= 0.0) || !(s.B2 >= 0.0) || !std::isfinite(s.B1) || !std::isfinite(s.B2))
    throw Error(ErrorCode::kNegativeBudget, "budgets must be >= 0");
  return s;
}

inline constexpr double kAllocationTol = 1e-9;

// Nonnegative entries of length K summing to at most `budget` (within 1e-9).
inline bool is_valid_allocation(std::span<const double> a, int K, double budget) {
  if (static_cast<int>(a.size()) != K) return false;
  double sum = 0.0;
  for (double v : a) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return sum <= budget + kAllocationTol;
}

inline void require_allocation(std::span<const double> a, const Scenario& s, Firm owner) {
  if (!is_valid_allocation(a, s.K, s.budget(owner)))
    throw Error(ErrorCode::kInvalidAllocation,
                std::string(owner == Firm::kLeader ? "leader" : "follower") +
                    " allocation is negative, has the wrong length, or exceeds the budget");
}

// The same game with the roles of the two firms exchanged.
inline Scenario swap_firms(const Scenario& s) {
  Scenario t = s;
  std::swap(t.p1, t.p2);
  std::swap(t.delta1, t.delta2);
  std::swap(t.B1, t.B2);
  return t;
}

// Sub-game on the listed regions (0-based), budgets and pi unchanged.
inline Scenario restrict_regions(const Scenario& s, const std::vector<int>& regions) {
  Scenario t;
  t.K = static_cast<int>(regions.size());
  t.pi = s.pi;
  t.B1 = s.B1;
  t.B2 = s.B2;
  for (int k : regions) {
    t.p1.push_back(s.p1.at(k));
    t.p2.push_back(s.p2.at(k));
    t.delta1.push_back(s.delta1.at(k));
    t.delta2.push_back(s.delta2.at(k));
  }
  return t;
}

}  // namespace stackviral

#endif  // STACKVIRAL_SCENARIO_HPP
