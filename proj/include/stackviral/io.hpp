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

#ifndef STACKVIRAL_IO_HPP
#define STACKVIRAL_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stackviral/follower.hpp"
#include "stackviral/oracle.hpp"
#include "stackviral/scenario.hpp"
#include "stackviral/stackelberg.hpp"

namespace stackviral {

using Json = nlohmann::ordered_json;

// Every number leaves the program with 9 significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

inline Json number_array(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(rounded(x));
  return a;
}

inline Json region_list(RegionSet set) {
  Json a = Json::array();
  for (int k : set.members()) a.push_back(k + 1);
  return a;
}

namespace detail {

inline const Json& require_field(const Json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::kParseError, std::string("missing field '") + name + "'");
  return j.at(name);
}

inline double number_field(const Json& j, const char* name) {
  const Json& v = require_field(j, name);
  if (!v.is_number())
    throw Error(ErrorCode::kParseError, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> vector_field(const Json& j, const char* name) {
  const Json& v = require_field(j, name);
  if (!v.is_array())
    throw Error(ErrorCode::kParseError, std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number())
      throw Error(ErrorCode::kParseError,
                  std::string("field '") + name + "' must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "scenario must be a JSON object");
  Scenario s;
  const Json& K = detail::require_field(j, "K");
  if (!K.is_number_integer()) throw Error(ErrorCode::kParseError, "field 'K' must be an integer");
  s.K = K.get<int>();
  s.p1 = detail::vector_field(j, "p1");
  s.p2 = detail::vector_field(j, "p2");
  s.delta1 = detail::vector_field(j, "delta1");
  s.delta2 = detail::vector_field(j, "delta2");
  s.pi = detail::number_field(j, "pi");
  s.B1 = detail::number_field(j, "B1");
  s.B2 = detail::number_field(j, "B2");
  return validate_scenario(std::move(s));
}

inline Scenario parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline Json scenario_to_json(const Scenario& s) {
  return Json{{"K", s.K},
              {"p1", number_array(s.p1)},
              {"p2", number_array(s.p2)},
              {"delta1", number_array(s.delta1)},
              {"delta2", number_array(s.delta2)},
              {"pi", rounded(s.pi)},
              {"B1", rounded(s.B1)},
              {"B2", rounded(s.B2)}};
}

inline Json follower_solution_to_json(const FollowerSolution& f) {
  return Json{{"K2", region_list(f.winning_set)},
              {"K2_interior", region_list(f.interior_set)},
              {"gamma2", number_array(f.allocation)},
              {"u2", rounded(f.utility)},
              {"lambda", rounded(f.lambda)}};
}

inline Json best_response_to_json(const std::vector<FollowerSolution>& brset,
                                  const FollowerSolution& selected, Mode mode) {
  Json all = Json::array();
  for (const auto& f : brset) all.push_back(follower_solution_to_json(f));
  return Json{{"mode", to_string(mode)},
              {"selected", follower_solution_to_json(selected)},
              {"best_response_set", all}};
}

inline Json outcome_to_json(const StackelbergOutcome& o) {
  Json subsets = Json::array();
  for (std::size_t m = 0; m < o.per_subset_values.size(); ++m)
    subsets.push_back(Json{{"K1_bitmask", m},
                           {"value", rounded(o.per_subset_values[m])},
                           {"phase", o.per_subset_phase[m]}});
  const ReplyCheck& c = o.reply_check;
  return Json{{"mode", to_string(o.mode)},
              {"K1", region_list(o.K1)},
              {"K1_bitmask", o.K1.mask()},
              {"gamma1", number_array(o.gamma1)},
              {"u1", rounded(o.u1)},
              {"K2", region_list(o.K2)},
              {"K2_bitmask", o.K2.mask()},
              {"K2_interior", region_list(o.K2_interior)},
              {"gamma2", number_array(o.gamma2)},
              {"u2", rounded(o.u2)},
              {"reply_check",
               Json{{"agrees", c.agrees},
                    {"closed_form_K2", region_list(c.closed_form.winning_set)},
                    {"closed_form_u2", rounded(c.closed_form.utility)},
                    {"general_u2", rounded(c.general_utility)},
                    {"message", c.message}}},
              {"subsets", subsets}};
}

inline Json oracle_report_to_json(const oracle::OracleReport& r) {
  return Json{{"solver_value", rounded(r.solver_value)},
              {"oracle_value", rounded(r.oracle_value)},
              {"gap", rounded(r.gap)},
              {"best_grid_point", number_array(r.best_grid_point)},
              {"tolerance", rounded(r.tolerance)},
              {"verdict", r.pass ? "pass" : "fail"}};
}

// "0.6,1.7, 2.8" -> {0.6, 1.7, 2.8}
inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) throw Error(ErrorCode::kParseError, "empty list entry in '" + text + "'");
    const auto last = item.find_last_not_of(" \t");
    item = item.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size() || !std::isfinite(v))
      throw Error(ErrorCode::kParseError, "'" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::kParseError, "empty number list");
  return out;
}

}  // namespace stackviral

#endif  // STACKVIRAL_IO_HPP
