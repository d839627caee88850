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

#ifndef STACKVIRAL_SWEEP_HPP
#define STACKVIRAL_SWEEP_HPP

#include <ostream>
#include <string>
#include <vector>

#include "stackviral/io.hpp"
#include "stackviral/stackelberg.hpp"

namespace stackviral {

struct SweepRow {
  double B1 = 0.0;
  double B2 = 0.0;
  Mode mode = Mode::kWeak;
  StackelbergOutcome outcome;
};

// Solves the game for every (B1, B2) pair, B1 outermost, then for each mode
// in the order given.
inline std::vector<SweepRow> run_sweep(const Scenario& base, const std::vector<double>& b1_values,
                                       const std::vector<double>& b2_values,
                                       const std::vector<Mode>& modes,
                                       const StackelbergOptions& opt = {}) {
  if (b1_values.empty() || b2_values.empty())
    throw Error(ErrorCode::kInvalidArgument, "sweep budget lists must be nonempty");
  std::vector<SweepRow> rows;
  for (double b1 : b1_values)
    for (double b2 : b2_values) {
      Scenario s = base;
      s.B1 = b1;
      s.B2 = b2;
      validate_scenario(s);
      for (Mode m : modes) rows.push_back({b1, b2, m, solve_stackelberg(s, m, opt)});
    }
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int K) {
  out << "B1,B2,mode,u1,u2,K1_bitmask,K2_bitmask";
  for (int k = 1; k <= K; ++k) out << ",gamma1_" << k;
  for (int k = 1; k <= K; ++k) out << ",gamma2_" << k;
  out << '\n';
  for (const SweepRow& r : rows) {
    const StackelbergOutcome& o = r.outcome;
    out << format_number(r.B1) << ',' << format_number(r.B2) << ',' << to_string(r.mode) << ','
        << format_number(o.u1) << ',' << format_number(o.u2) << ',' << o.K1.mask() << ','
        << o.K2.mask();
    for (double v : o.gamma1) out << ',' << format_number(v);
    for (double v : o.gamma2) out << ',' << format_number(v);
    out << '\n';
  }
}

// Verdict on one qualitative statement about a sweep, with the rows that
// contradict it.
struct ClaimVerdict {
  std::string claim;
  bool holds = true;
  int rows_checked = 0;
  std::vector<const SweepRow*> counterexamples;
};

// (a) with equal budgets the follower earns more than the leader;
// (b) whenever B1 <= B2 the leader earns strictly less than the follower.
inline std::vector<ClaimVerdict> evaluate_claims(const std::vector<SweepRow>& rows) {
  ClaimVerdict a, b;
  a.claim = "the follower has a higher revenue at equal budgets (u2 > u1 when B1 = B2)";
  b.claim = "no case with B1 <= B2 and u1 >= u2";
  for (const SweepRow& r : rows) {
    const double u1 = r.outcome.u1, u2 = r.outcome.u2;
    if (r.B1 == r.B2) {
      ++a.rows_checked;
      if (!(u2 > u1)) a.counterexamples.push_back(&r);
    }
    if (r.B1 <= r.B2) {
      ++b.rows_checked;
      if (u1 >= u2) b.counterexamples.push_back(&r);
    }
  }
  a.holds = a.counterexamples.empty();
  b.holds = b.counterexamples.empty();
  return {a, b};
}

inline Json claims_to_json(const std::string& variant, const std::vector<ClaimVerdict>& claims) {
  Json out = Json::array();
  for (const ClaimVerdict& c : claims) {
    Json rows = Json::array();
    for (const SweepRow* r : c.counterexamples)
      rows.push_back(Json{{"B1", rounded(r->B1)},
                          {"B2", rounded(r->B2)},
                          {"mode", to_string(r->mode)},
                          {"u1", rounded(r->outcome.u1)},
                          {"u2", rounded(r->outcome.u2)}});
    out.push_back(Json{{"variant", variant},
                       {"claim", c.claim},
                       {"verdict", c.holds ? "pass" : "fail"},
                       {"rows_checked", c.rows_checked},
                       {"counterexamples", rows}});
  }
  return out;
}

}  // namespace stackviral

#endif  // STACKVIRAL_SWEEP_HPP
