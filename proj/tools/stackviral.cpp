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

// Command-line front end: br, solve, sweep, verify, simulate.
// Exit status 0 on success, 1 on bad input, 2 when a verification fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stackviral/follower.hpp"
#include "stackviral/io.hpp"
#include "stackviral/oracle.hpp"
#include "stackviral/sis.hpp"
#include "stackviral/stackelberg.hpp"
#include "stackviral/sweep.hpp"

namespace sv = stackviral;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerify = 2;

sv::Mode parse_mode(const std::string& m) { return m == "strong" ? sv::Mode::kStrong : sv::Mode::kWeak; }

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sv::Error(sv::ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
}

struct Common {
  std::string scenario;
  std::string out;
};

int run_br(const Common& c, const std::string& gamma1_text, const std::string& mode_text) {
  const sv::Scenario s = sv::load_scenario(c.scenario);
  const sv::Allocation g1 = sv::parse_number_list(gamma1_text);
  sv::require_allocation(g1, s, sv::Firm::kLeader);
  const sv::Mode mode = parse_mode(mode_text);
  const auto brset = sv::best_response_set(g1, s);
  const auto& chosen = sv::select_br(brset, sv::selection_for(mode), g1, s);
  sv::Json j = sv::best_response_to_json(brset, chosen, mode);
  j["u1"] = sv::rounded(sv::leader_utility(g1, chosen.allocation, s));
  emit(j.dump(2) + "\n", c.out);
  return kExitOk;
}

int run_solve(const Common& c, const std::string& mode_text, double tol,
              const std::vector<double>& b1, const std::vector<double>& b2) {
  sv::Scenario s = sv::load_scenario(c.scenario);
  if (!b1.empty()) s.B1 = b1.front();
  if (!b2.empty()) s.B2 = b2.front();
  s = sv::validate_scenario(s);
  const sv::StackelbergOutcome o = sv::solve_stackelberg(s, parse_mode(mode_text), {tol});
  if (!o.reply_check.agrees) std::cerr << "warning: " << o.reply_check.message << "\n";
  sv::Json j{{"scenario", sv::scenario_to_json(s)}, {"outcome", sv::outcome_to_json(o)}};
  emit(j.dump(2) + "\n", c.out);
  return kExitOk;
}

int run_sweep(const Common& c, const std::string& b1_text, const std::string& b2_text,
              const std::string& mode_text, bool with_swapped) {
  const sv::Scenario s = sv::load_scenario(c.scenario);
  const auto b1 = sv::parse_number_list(b1_text);
  const auto b2 = sv::parse_number_list(b2_text);
  std::vector<sv::Mode> modes;
  if (mode_text != "strong") modes.push_back(sv::Mode::kWeak);
  if (mode_text != "weak") modes.push_back(sv::Mode::kStrong);

  std::filesystem::create_directories(c.out);
  sv::Json claims = sv::Json::array();
  const auto sweep_variant = [&](const sv::Scenario& base, const std::string& variant,
                                 const std::string& file) {
    const auto rows = sv::run_sweep(base, b1, b2, modes);
    std::ostringstream csv;
    sv::write_sweep_csv(csv, rows, base.K);
    emit(csv.str(), (std::filesystem::path(c.out) / file).string());
    for (const auto& v : sv::claims_to_json(variant, sv::evaluate_claims(rows))) {
      std::cout << variant << ": " << v["claim"].get<std::string>() << " -> "
                << v["verdict"].get<std::string>() << "\n";
      claims.push_back(v);
    }
  };
  sweep_variant(s, "original", "sweep.csv");
  if (with_swapped) sweep_variant(sv::swap_firms(s), "swapped", "sweep_swapped.csv");
  emit(sv::Json{{"claims", claims}}.dump(2) + "\n",
       (std::filesystem::path(c.out) / "claims.json").string());
  return kExitOk;
}

int run_verify(const Common& c, double step, int k_max, double tol) {
  const sv::Scenario s = sv::load_scenario(c.scenario);
  if (!(step > 0.0 && step <= 1.0))
    throw sv::Error(sv::ErrorCode::kInvalidArgument, "--step is a budget fraction in (0,1]");
  if (k_max < 1) throw sv::Error(sv::ErrorCode::kInvalidArgument, "--k-max must be >= 1");
  sv::Json reports = sv::Json::array();
  bool all_pass = true;
  const sv::RegionSet all = sv::RegionSet::full(s.K);
  sv::for_each_subset(all, [&](sv::RegionSet regions) {
    if (regions.empty() || regions.size() > k_max) return;
    const sv::Scenario sub = sv::restrict_regions(s, regions.members());
    const sv::Allocation idle(sub.K, 0.0);
    const auto follower = sv::oracle::oracle_follower_br(idle, sub, {step * sub.B2});
    const auto fr = sv::oracle::make_report(sv::best_response_value(idle, sub), follower.utility,
                                            follower.allocation, tol);
    all_pass = all_pass && fr.pass;
    reports.push_back(sv::Json{{"regions", sv::region_list(regions)},
                               {"check", "follower best response at gamma1 = 0"},
                               {"report", sv::oracle_report_to_json(fr)}});
    for (sv::Mode mode : {sv::Mode::kWeak, sv::Mode::kStrong}) {
      const auto solved = sv::solve_stackelberg(sub, mode);
      const auto grid = sv::oracle::oracle_stackelberg(sub, {step * sub.B1}, mode);
      const auto lr = sv::oracle::make_report(solved.u1, grid.u1, grid.gamma1, tol);
      all_pass = all_pass && lr.pass;
      reports.push_back(sv::Json{{"regions", sv::region_list(regions)},
                                 {"check", std::string("leader value, ") + sv::to_string(mode)},
                                 {"report", sv::oracle_report_to_json(lr)}});
      std::cerr << sv::region_list(regions).dump() << " " << sv::to_string(mode)
                << " gap=" << sv::format_number(lr.gap) << (lr.pass ? " pass" : " FAIL") << "\n";
    }
  });
  emit(sv::Json{{"all_pass", all_pass}, {"reports", reports}}.dump(2) + "\n", c.out);
  return all_pass ? kExitOk : kExitVerify;
}

int run_simulate(const Common& c, int region, double g1, double g2, sv::SimulationOptions opt,
                 double tol) {
  const sv::Scenario s = sv::load_scenario(c.scenario);
  if (region < 1 || region > s.K)
    throw sv::Error(sv::ErrorCode::kInvalidArgument, "--region must lie in 1..K");
  const int k = region - 1;
  const sv::Trajectory tr = sv::simulate_bi_sis(k, g1, g2, s, opt);
  std::ostringstream csv;
  csv << "t,x1,x2\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    csv << sv::format_number(tr.times[i]) << ',' << sv::format_number(tr.x1[i]) << ','
        << sv::format_number(tr.x2[i]) << '\n';
  emit(csv.str(), c.out);
  const sv::SteadyStateReport r = sv::steady_state_check(tr, k, g1, g2, s, tol);
  const sv::Json summary{{"region", region},
                         {"predicted_winner", sv::to_string(r.predicted.winner)},
                         {"predicted", sv::number_array(std::vector{r.predicted.x1_inf,
                                                                    r.predicted.x2_inf})},
                         {"terminal", sv::number_array(std::vector{r.x1, r.x2})},
                         {"error", sv::rounded(r.error)},
                         {"tolerance", sv::rounded(tol)},
                         {"status", sv::to_string(r.status)}};
  std::cerr << summary.dump() << "\n";
  return r.status == sv::CheckStatus::kFail ? kExitVerify : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader/follower viral-marketing budget game solver"};
  app.require_subcommand(1);
  const std::vector<std::string> mode_names{"weak", "strong"};

  Common br_c, solve_c, sweep_c, verify_c, sim_c;
  auto scenario_opt = [](CLI::App* cmd, Common& c) {
    cmd->add_option("--scenario", c.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  };

  std::string br_gamma1, br_mode = "weak";
  auto* br = app.add_subcommand("br", "Follower best response to a leader allocation");
  scenario_opt(br, br_c);
  br->add_option("--gamma1", br_gamma1, "Leader allocation, comma separated")->required();
  br->add_option("--mode", br_mode)->check(CLI::IsMember(mode_names));
  br->add_option("--out", br_c.out, "Write JSON here instead of stdout");

  std::string solve_mode = "weak";
  double solve_tol = 1e-6;
  std::vector<double> solve_b1, solve_b2;
  auto* solve = app.add_subcommand("solve", "Stackelberg equilibrium");
  scenario_opt(solve, solve_c);
  solve->add_option("--mode", solve_mode)->check(CLI::IsMember(mode_names));
  solve->add_option("--tol", solve_tol, "Bisection tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--b1", solve_b1, "Override the leader budget")->expected(1);
  solve->add_option("--b2", solve_b2, "Override the follower budget")->expected(1);
  solve->add_option("--out", solve_c.out, "Write JSON here instead of stdout");

  std::string sweep_b1, sweep_b2, sweep_mode = "weak";
  bool sweep_swapped = false;
  auto* sweep = app.add_subcommand("sweep", "Budget sweep with CSV and claims report");
  scenario_opt(sweep, sweep_c);
  sweep->add_option("--b1", sweep_b1, "Leader budgets, comma separated")->required();
  sweep->add_option("--b2", sweep_b2, "Follower budgets, comma separated")->required();
  sweep->add_option("--out", sweep_c.out, "Output directory")->required();
  sweep->add_option("--mode", sweep_mode)->check(CLI::IsMember({"weak", "strong", "both"}));
  sweep->add_flag("--swap-firms", sweep_swapped, "Also sweep the game with the firms swapped");

  double verify_step = 0.01, verify_tol = 1e-3;
  int verify_kmax = 3;
  auto* verify = app.add_subcommand("verify", "Compare solver against the grid oracle");
  scenario_opt(verify, verify_c);
  verify->add_option("--step", verify_step, "Grid step as a fraction of the budget");
  verify->add_option("--k-max", verify_kmax, "Largest region subset to check");
  verify->add_option("--tol", verify_tol, "Allowed shortfall against the grid")->check(CLI::NonNegativeNumber);
  verify->add_option("--out", verify_c.out, "Write JSON here instead of stdout");

  int sim_region = 1;
  double sim_g1 = 0.0, sim_g2 = 0.0, sim_tol = 1e-2;
  sv::SimulationOptions sim_opt;
  auto* simulate = app.add_subcommand("simulate", "Integrate one region's two-virus SIS dynamics");
  scenario_opt(simulate, sim_c);
  simulate->add_option("--region", sim_region, "Region index, 1-based")->required();
  simulate->add_option("--gamma1", sim_g1, "Leader spend in the region")->required();
  simulate->add_option("--gamma2", sim_g2, "Follower spend in the region")->required();
  simulate->add_option("--horizon", sim_opt.horizon);
  simulate->add_option("--dt", sim_opt.dt);
  simulate->add_option("--seed", sim_opt.seed, "Initial share of a newly seeded firm");
  simulate->add_option("--tol", sim_tol, "Steady-state tolerance");
  simulate->add_option("--out", sim_c.out, "Write the CSV trajectory here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*br) return run_br(br_c, br_gamma1, br_mode);
    if (*solve) return run_solve(solve_c, solve_mode, solve_tol, solve_b1, solve_b2);
    if (*sweep) return run_sweep(sweep_c, sweep_b1, sweep_b2, sweep_mode, sweep_swapped);
    if (*verify) return run_verify(verify_c, verify_step, verify_kmax, verify_tol);
    if (*simulate) return run_simulate(sim_c, sim_region, sim_g1, sim_g2, sim_opt, sim_tol);
  } catch (const sv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
