// Copyright 2026 The apgame Authors
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


// Batch front-end. Each command reads an optional JSON config, writes its
// artifacts into --out and exits with 0 (ok), 2 (config), 3 (numerical) or
// 4 (verdict violated). Errors are printed to stderr as one JSON object.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "apgame/alpha_bounds.h"
#include "apgame/column_store.h"
#include "apgame/errors.h"
#include "apgame/game_model.h"
#include "apgame/general_game.h"
#include "apgame/ne_verify.h"
#include "apgame/ode_solvers.h"
#include "apgame/parallel.h"
#include "apgame/potential_eval.h"
#include "apgame/quadrature.h"
#include "apgame/sde_sim.h"
#include "apgame/sweep.h"
#include "apgame/version.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace apgame {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitViolated = 4;

struct Plan {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 1;
  int paths = 0;  // 0: command default
  int steps = 0;  // 0: TimeGrid::Default
  int r_nodes = 4;
  int deviations = 20;  // per kind and player
  std::vector<int> n_list;
  std::string regime = "exponential";
  double envelope_c = 1.0;
  double beta = 0.5;

  json config = nullptr;  // parsed config, null if none
};

uint64_t Fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string ConfigHash(const json& config) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << Fnv1a(config.dump());
  return os.str();
}

json Meta(const Plan& plan, const TimeGrid* grid) {
  json m = {{"command", plan.command},
            {"config_hash", ConfigHash(plan.config)},
            {"seed", plan.seed},
            {"version", kVersion}};
  if (grid != nullptr) {
    m["grid"] = {{"horizon", grid->horizon()}, {"n_steps", grid->n_steps()}};
  }
  return m;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string(), "out");
  f << text;
}

void WriteJson(const Plan& plan, const std::string& name, const json& body) {
  WriteText(fs::path(plan.out_dir) / name, body.dump(2) + "\n");
}

void AttachMeta(const json& meta, ColumnTable* t) {
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    t->meta[it.key()] = it.value().is_string() ? it.value().get<std::string>()
                                               : it.value().dump();
  }
}

LqGameSpec RequireLqSpec(const Plan& plan) {
  if (plan.config.is_null()) throw ConfigError("--config is required", "config");
  return GameSpecFromJson(plan.config);
}

TimeGrid PlanGrid(const Plan& plan, double horizon) {
  if (plan.steps < 0) throw ConfigError("--steps must be positive", "steps");
  return plan.steps > 0 ? TimeGrid::Uniform(horizon, plan.steps)
                        : TimeGrid::Default(horizon);
}

int PlanPaths(const Plan& plan, const LqGameSpec& spec, int dflt) {
  if (plan.paths < 0) throw ConfigError("--paths must be positive", "paths");
  bool noisy = false;
  for (const auto& s : spec.sigma_fn) noisy |= !(s.IsConstant() && s(0.0) == 0.0);
  if (!noisy) return 1;
  return plan.paths > 0 ? plan.paths : dflt;
}

// ---- commands ----

int RunAlphaBound(const Plan& plan) {
  json out = {{"meta", Meta(plan, nullptr)}};
  if (plan.config.contains("fixture")) {
    const json& fx = plan.config["fixture"];
    const std::string name = fx.value("name", "");
    const int n = fx.value("n", 4);
    const double horizon = fx.value("horizon", 1.0);
    GeneralGameSpec g;
    if (name == "distributed") {
      g = MakeDistributedExample(n, horizon);
    } else if (name == "mean-field") {
      g = MakeMeanFieldExample(n, horizon);
    } else {
      throw ConfigError("unknown fixture '" + name + "'", "fixture.name");
    }
    SupNormOptions so;
    so.seed = plan.seed;
    const auto table = EstimatePairBounds(g, so);
    out["fixture"] = name;
    out["theorem"] =
        TheoremAlphaBound(table, g.drift_bounds, n, plan.envelope_c).ToJson();
  } else {
    const LqGameSpec spec = RequireLqSpec(plan);
    const GeneralGameSpec g = ToGeneral(spec);
    out["asymmetry_index"] = AsymmetryIndex(spec.q);
    out["lq_bound"] = LqAlphaBound(spec, plan.envelope_c);
    out["theorem"] = TheoremAlphaBound(LqPairBounds(spec), g.drift_bounds,
                                       spec.n_players, plan.envelope_c)
                         .ToJson();
  }
  WriteJson(plan, "alpha_bound.json", out);
  std::cout << out["theorem"]["bound"] << "\n";
  return kExitOk;
}

int RunSolve(const Plan& plan) {
  const LqGameSpec spec = RequireLqSpec(plan);
  const TimeGrid grid = PlanGrid(plan, spec.horizon);
  const RiccatiSolution sol = SolveRiccati(spec, grid);
  const json meta = Meta(plan, &grid);

  ColumnTable store = ToColumnTable(sol);
  AttachMeta(meta, &store);
  WriteColumnStore((fs::path(plan.out_dir) / "riccati.apgcol").string(), store);
  ColumnTable plot = ToPlotTable(sol);
  AttachMeta(meta, &plot);
  WriteCsv((fs::path(plan.out_dir) / "riccati_plot.csv").string(), plot);

  const ResidualReport& r = sol.residual;
  json out = {{"meta", meta},
              {"residual",
               {{"m0", r.m0}, {"m1", r.m1}, {"m2", r.m2}, {"m3", r.m3},
                {"m0_scale", r.m0_scale}, {"m1_scale", r.m1_scale},
                {"m2_scale", r.m2_scale}, {"m3_scale", r.m3_scale}}},
              {"optimal_potential", OptimalPotentialValue(sol, spec)}};
  WriteJson(plan, "solve.json", out);
  std::cout << out["residual"].dump() << "\n";
  return kExitOk;
}

int RunSimulate(const Plan& plan) {
  const LqGameSpec spec = RequireLqSpec(plan);
  const TimeGrid grid = PlanGrid(plan, spec.horizon);
  const RiccatiSolution sol = SolveRiccati(spec, grid);
  const auto profile =
      StrategyProfile::Feedback(FeedbackLaw::FromRiccati(spec, sol, grid));
  const NoiseBatch noise = NoiseBatch::Make(
      plan.seed, PlanPaths(plan, spec, 1000), grid, spec.n_players);
  const PathBundle paths = SimulateState(spec, profile, noise);
  const json meta = Meta(plan, &grid);

  ColumnTable store = paths.ToColumnTable(paths.n_paths());
  AttachMeta(meta, &store);
  WriteColumnStore((fs::path(plan.out_dir) / "paths.apgcol").string(), store);
  const int stride = std::max(1, grid.n_steps() / 200);
  ColumnTable plot = paths.ToColumnTable(std::min(paths.n_paths(), 10), stride);
  AttachMeta(meta, &plot);
  WriteCsv((fs::path(plan.out_dir) / "paths.csv").string(), plot);

  json terminal = json::array();
  const int last = grid.n_steps();
  for (int i = 0; i < spec.n_players; ++i) {
    std::vector<double> xt;
    for (const auto& x : paths.x) xt.push_back(x(i, last));
    const auto st = MeanAndStdError(xt);
    terminal.push_back({{"player", i}, {"mean", st.mean}, {"std_error", st.std_error}});
  }
  json out = {{"meta", meta}, {"n_paths", paths.n_paths()}, {"terminal_state", terminal}};
  WriteJson(plan, "simulate.json", out);
  std::cout << terminal.dump() << "\n";
  return kExitOk;
}

int RunPotential(const Plan& plan) {
  const LqGameSpec spec = RequireLqSpec(plan);
  const TimeGrid grid = PlanGrid(plan, spec.horizon);
  const RiccatiSolution sol = SolveRiccati(spec, grid);
  const auto profile =
      StrategyProfile::Feedback(FeedbackLaw::FromRiccati(spec, sol, grid));
  const NoiseBatch noise = NoiseBatch::Make(
      plan.seed, PlanPaths(plan, spec, 1000), grid, spec.n_players,
      RSpec::Quadrature(plan.r_nodes));
  const QuadratureRule rule = GaussLegendre01(plan.r_nodes);

  json values = json::array();
  for (const auto& v : EstimateValues(ToGeneral(spec), profile, noise)) {
    values.push_back(v.ToJson());
  }
  json out = {
      {"meta", Meta(plan, &grid)},
      {"control_id", "riccati_feedback"},
      {"r_nodes", plan.r_nodes},
      {"phi_lifted", EstimatePotentialLq(spec, profile, noise).ToJson()},
      {"phi_sensitivity",
       EstimatePotentialSensitivity(ToGeneral(spec), profile, noise, rule).ToJson()},
      {"values", values},
      {"optimal_potential_riccati", OptimalPotentialValue(sol, spec)}};
  WriteJson(plan, "potential.json", out);
  std::cout << out["phi_lifted"]["value"] << " " << out["phi_sensitivity"]["value"]
            << "\n";
  return kExitOk;
}

int RunVerifyNe(const Plan& plan) {
  const LqGameSpec spec = RequireLqSpec(plan);
  const TimeGrid grid = PlanGrid(plan, spec.horizon);
  const RiccatiSolution sol = SolveRiccati(spec, grid);
  const int n_paths = PlanPaths(plan, spec, 200);
  const NoiseBatch noise =
      NoiseBatch::Make(plan.seed, n_paths, grid, spec.n_players);
  const RefinementBiasReport bias =
      RefinementBias(spec, grid.n_steps(), n_paths, plan.seed);
  NeBudget budget;
  budget.scaled = budget.time_bump = budget.feedback_tilt = budget.random_path =
      budget.gradient_tilt = plan.deviations;
  budget.seed = plan.seed;
  budget.options.control_bound = spec.control_bound;
  const double alpha = LqAlphaBound(spec, plan.envelope_c);
  const NeReport rep =
      CheckEpsilonNe(spec, sol, budget, noise, alpha, bias.max_abs_delta);

  json out = rep.ToJson();
  out["meta"] = Meta(plan, &grid);
  out["refinement_bias"] = {{"max_abs_delta", bias.max_abs_delta},
                            {"std_error", bias.std_error},
                            {"delta", bias.delta}};
  WriteJson(plan, "ne_report.json", out);
  WriteText(fs::path(plan.out_dir) / "ne_report.txt", rep.ToTable());
  std::cout << rep.ToTable();
  return rep.verdict == Verdict::kViolated ? kExitViolated : kExitOk;
}

int RunCheckPotential(const Plan& plan) {
  const LqGameSpec spec = RequireLqSpec(plan);
  const TimeGrid grid = PlanGrid(plan, spec.horizon);
  const RiccatiSolution sol = SolveRiccati(spec, grid);
  const auto base =
      StrategyProfile::Feedback(FeedbackLaw::FromRiccati(spec, sol, grid));
  const GeneralGameSpec general = ToGeneral(spec);
  const NoiseBatch noise = NoiseBatch::Make(
      plan.seed, PlanPaths(plan, spec, 200), grid, spec.n_players);
  DeviationOptions opts;
  opts.control_bound = spec.control_bound;
  std::vector<Deviation> devs;
  for (int i = 0; i < spec.n_players; ++i) {
    for (DeviationKind k : {DeviationKind::kScaled, DeviationKind::kTimeBump,
                            DeviationKind::kFeedbackTilt, DeviationKind::kRandomPath}) {
      for (auto& d : SampleDeviations(base, i, k, plan.deviations, plan.seed, opts)) {
        devs.push_back(std::move(d));
      }
    }
  }
  const AlphaCheckReport rep = CheckAlphaPotential(
      general, base, devs, noise,
      LiftedPhi(spec, grid, GaussLegendre01(plan.r_nodes)),
      LqAlphaBound(spec, plan.envelope_c));

  json out = rep.ToJson();
  out["meta"] = Meta(plan, &grid);
  out["envelope_c"] = plan.envelope_c;
  WriteJson(plan, "alpha_check.json", out);
  WriteText(fs::path(plan.out_dir) / "alpha_check.txt", rep.ToTable());
  std::cout << "max_gap " << rep.max_gap << " reference " << rep.alpha_reference
            << " " << VerdictName(rep.verdict) << "\n";
  return rep.verdict == Verdict::kViolated ? kExitViolated : kExitOk;
}

int RunRegimeSweepCommand(const Plan& plan) {
  SweepOptions opts;
  opts.regime = ParseRegime(plan.regime);
  if (!plan.n_list.empty()) opts.n_list = plan.n_list;
  opts.envelope_c = plan.envelope_c;
  opts.params.beta = plan.beta;
  opts.r_nodes = plan.r_nodes;
  if (plan.steps > 0) opts.n_steps = plan.steps;
  if (plan.config.is_object() && plan.config.contains("sweep")) {
    const json& s = plan.config["sweep"];
    opts.horizon = s.value("horizon", opts.horizon);
    opts.base_control = s.value("base_control", opts.base_control);
    opts.amplitude = s.value("amplitude", opts.amplitude);
    opts.params.c = s.value("c", opts.params.c);
    if (s.contains("w")) opts.params.w = s["w"].get<std::vector<double>>();
  }
  const SweepResult res = RunRegimeSweep(opts);
  const TimeGrid grid = TimeGrid::Uniform(opts.horizon, opts.n_steps);
  const json meta = Meta(plan, &grid);

  std::ostringstream csv;
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    csv << "# " << it.key() << "="
        << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
        << "\n";
  }
  csv << res.ToCsv();
  WriteText(fs::path(plan.out_dir) / "sweep.csv", csv.str());
  json out = res.ToJson();
  out["meta"] = meta;
  WriteJson(plan, "sweep.json", out);
  std::cout << res.ToCsv() << "bound slope " << res.bound_fit.slope
            << ", gap slope " << res.gap_fit.slope << "\n";
  return kExitOk;
}

void WriteSidecar(const Plan& plan, const std::vector<std::string>& argv,
                  int status) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::ostringstream ts;
  ts << std::put_time(std::gmtime(&tt), "%Y-%m-%dT%H:%M:%SZ");
  json side = {{"timestamp_utc", ts.str()}, {"argv", argv}, {"exit_status", status}};
  std::ofstream(fs::path(plan.out_dir) / "run_meta.json") << side.dump(2) << "\n";
}

int Fail(int code, const std::string& kind, const std::string& message,
         json extra = json::object()) {
  json err = {{"error", kind}, {"message", message}, {"exit_code", code}};
  err.update(extra);
  std::cerr << err.dump() << "\n";
  return code;
}

int Dispatch(Plan& plan) {
  if (!plan.config_path.empty()) {
    std::ifstream f(plan.config_path);
    if (!f) throw ConfigError("cannot open " + plan.config_path, "config");
    try {
      plan.config = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what(), "config");
    }
  }
  std::error_code ec;
  fs::create_directories(plan.out_dir, ec);
  if (ec || !fs::is_directory(plan.out_dir)) {
    throw ConfigError("output directory not writable", "out");
  }
  if (plan.command == "alpha-bound") return RunAlphaBound(plan);
  if (plan.command == "solve") return RunSolve(plan);
  if (plan.command == "simulate") return RunSimulate(plan);
  if (plan.command == "potential") return RunPotential(plan);
  if (plan.command == "verify-ne") return RunVerifyNe(plan);
  if (plan.command == "check-potential") return RunCheckPotential(plan);
  return RunRegimeSweepCommand(plan);
}

}  // namespace
}  // namespace apgame

int main(int argc, char** argv) {
  using namespace apgame;
  Plan plan;
  CLI::App app{"apgame: alpha-potential graph games"};
  app.require_subcommand(1, 1);
  const std::vector<std::string> commands = {
      "alpha-bound", "solve", "simulate", "potential",
      "verify-ne", "check-potential", "regime-sweep"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", plan.config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", plan.out_dir, "output directory");
    sub->add_option("--seed", plan.seed);
    sub->add_option("--paths", plan.paths);
    sub->add_option("--steps", plan.steps);
    sub->add_option("--r-nodes", plan.r_nodes);
    sub->add_option("--deviations", plan.deviations, "per kind and player");
    sub->add_option("--n-list", plan.n_list)->delimiter(',');
    sub->add_option("--regime", plan.regime);
    sub->add_option("--envelope-c", plan.envelope_c);
    sub->add_option("--beta", plan.beta);
    sub->callback([&plan, name] { plan.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail(2, "config", e.what());
  }

  int status = 0;
  try {
    status = Dispatch(plan);
  } catch (const ConfigError& e) {
    status = Fail(2, "config", e.what(), {{"field", e.field_path()}});
  } catch (const BlowUpError& e) {
    status = Fail(3, "blow_up", e.what(), {{"knot", e.knot()}, {"time", e.time()}});
  } catch (const NumericalError& e) {
    status = Fail(3, "numerical", e.what());
  } catch (const std::exception& e) {
    status = Fail(1, "internal", e.what());
  }
  if (fs::is_directory(plan.out_dir)) {
    WriteSidecar(plan, std::vector<std::string>(argv, argv + argc), status);
  }
  return status;
}
