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


#include "apgame/sweep.h"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "apgame/errors.h"
#include "apgame/general_game.h"
#include "apgame/ne_verify.h"
#include "apgame/parallel.h"
#include "apgame/quadrature.h"

namespace apgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

LqGameSpec SweepSpec(const SweepOptions& opts, int n) {
  if (n < 1) throw ConfigError("sweep N must be positive", "n_list");
  RegimeParams p = opts.params;
  if (p.w.empty()) p.w = DefaultRegimeWeights(n);
  if (static_cast<int>(p.w.size()) < n) {
    throw ConfigError("regime weights shorter than N", "w");
  }
  p.w.resize(n);
  LqGameSpec s;
  s.n_players = n;
  s.horizon = opts.horizon;
  s.q = MakeRegimeWeights(opts.regime, n, p);
  s.gamma = VectorXd::Ones(n);
  s.d.resize(n);
  s.x0.resize(n);
  for (int i = 0; i < n; ++i) {
    s.d(i) = 0.5 * std::cos(i + 1.0);
    s.x0(i) = 0.5 * std::sin(i + 1.0);
    s.a_fn.push_back(Coefficient::Constant(0.0));
    s.sigma_fn.push_back(Coefficient::Constant(0.0));
  }
  Validate(s);
  return s;
}

SweepRow RunSweepEntry(const SweepOptions& opts, int n) {
  const LqGameSpec spec = SweepSpec(opts, n);
  const TimeGrid grid = TimeGrid::Uniform(opts.horizon, opts.n_steps);
  const int steps = grid.n_steps();
  const auto base = StrategyProfile::Deterministic(
      grid, MatrixXd::Constant(n, steps, opts.base_control));

  std::vector<VectorXd> shapes(3, VectorXd(steps));
  for (int k = 0; k < steps; ++k) {
    const double s = grid.t(k) / opts.horizon;
    shapes[0](k) = 1.0;
    shapes[1](k) = s;
    shapes[2](k) = std::sin(M_PI * s);
  }
  static const char* kLabels[] = {"shift-const", "shift-ramp", "shift-sine"};
  std::vector<Deviation> devs;
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < 3; ++m) {
      Deviation d;
      d.player = i;
      d.kind = DeviationKind::kTimeBump;
      d.profile = base.Shifted(i, shapes[m], opts.amplitude);
      d.label = kLabels[m];
      devs.push_back(std::move(d));
    }
  }
  const NoiseBatch noise = NoiseBatch::Make(0, 1, grid, n);
  const AlphaCheckReport rep = CheckAlphaPotential(
      ToGeneral(spec), base, devs, noise,
      LiftedPhi(spec, grid, GaussLegendre01(opts.r_nodes)), 0.0);

  SweepRow row;
  row.n = n;
  row.regime = opts.regime;
  row.asymmetry_index = AsymmetryIndex(spec.q);
  row.bound = LqAlphaBound(spec, opts.envelope_c);
  row.measured_gap = rep.max_gap;
  row.gap_sigma = rep.max_gap_std_error;
  row.argmax_player = rep.trials.empty() ? 0 : rep.trials[rep.argmax_trial].player;
  return row;
}

SweepResult RunRegimeSweep(const SweepOptions& opts) {
  if (opts.n_list.empty()) throw ConfigError("empty N list", "n_list");
  SweepResult out;
  out.options = opts;
  out.rows.resize(opts.n_list.size());
  ParallelFor(static_cast<int>(opts.n_list.size()), [&](int k) {
    out.rows[k] = RunSweepEntry(opts, opts.n_list[k]);
  });
  std::vector<double> ns, bounds, gaps;
  for (const SweepRow& r : out.rows) {
    ns.push_back(r.n);
    bounds.push_back(r.bound);
    gaps.push_back(r.measured_gap);
  }
  out.bound_fit = RegimeDecayFit(ns, bounds);
  out.gap_fit = RegimeDecayFit(ns, gaps);
  return out;
}

namespace {

nlohmann::json FitJson(const DecayFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2},
          {"used", f.used},   {"dropped", f.dropped},     {"flagged", f.flagged}};
}

}  // namespace

nlohmann::json SweepResult::ToJson() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    rows_json.push_back({{"N", r.n},
                         {"regime", RegimeName(r.regime)},
                         {"asymmetry_index", r.asymmetry_index},
                         {"bound", r.bound},
                         {"measured_gap", r.measured_gap},
                         {"gap_sigma", r.gap_sigma},
                         {"argmax_player", r.argmax_player}});
  }
  return {{"regime", RegimeName(options.regime)},
          {"beta", options.params.beta},
          {"envelope_c", options.envelope_c},
          {"horizon", options.horizon},
          {"n_steps", options.n_steps},
          {"base_control", options.base_control},
          {"amplitude", options.amplitude},
          {"rows", rows_json},
          {"bound_fit", FitJson(bound_fit)},
          {"gap_fit", FitJson(gap_fit)}};
}

std::string SweepResult::ToCsv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "N,regime,asymmetry_index,bound,measured_gap,gap_sigma\n";
  for (const SweepRow& r : rows) {
    os << r.n << ',' << RegimeName(r.regime) << ',' << r.asymmetry_index << ','
       << r.bound << ',' << r.measured_gap << ',' << r.gap_sigma << '\n';
  }
  return os.str();
}

}  // namespace apgame
