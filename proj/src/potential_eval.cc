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

#include "apgame/potential_eval.h"

#include <cmath>

#include "apgame/errors.h"
#include "apgame/parallel.h"

namespace apgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

nlohmann::json McEstimate::ToJson() const {
  return nlohmann::json{{"value", value},
                        {"std_error", std_error},
                        {"n_paths", n_paths},
                        {"seed", seed},
                        {"estimator_id", estimator_id},
                        {"grid", {{"horizon", horizon}, {"n_steps", n_steps}}},
                        {"flags", flags}};
}

McEstimate FromSamples(const std::vector<double>& samples,
                       const NoiseBatch& noise, std::string id) {
  for (double v : samples) {
    if (!std::isfinite(v)) throw NumericalError(id + ": non-finite sample");
  }
  const SampleStats s = MeanAndStdError(samples);
  McEstimate e;
  e.value = s.mean;
  e.std_error = s.std_error;
  e.n_paths = static_cast<int>(samples.size());
  e.seed = noise.seed();
  e.estimator_id = std::move(id);
  e.horizon = noise.grid().horizon();
  e.n_steps = noise.grid().n_steps();
  return e;
}

VectorXd PathValues(const GeneralGameSpec& spec, const TimeGrid& grid,
                    const MatrixXd& x, const MatrixXd& u) {
  const int n = spec.n_players;
  VectorXd v = VectorXd::Zero(n);
  VectorXd xk(n), uk(n);
  for (int k = 0; k < grid.n_steps(); ++k) {
    xk = x.col(k);
    uk = u.col(k);
    for (int i = 0; i < n; ++i) {
      v(i) += spec.running->Value(i, grid.t(k), xk, uk) * grid.dt(k);
    }
  }
  const VectorXd xt = x.col(grid.n_steps());
  for (int i = 0; i < n; ++i) v(i) += spec.terminal->Value(i, xt);
  return v;
}

double PathPotentialLq(const LiftedMatrices& lm, const TimeGrid& grid,
                       const VectorXd& x0, const MatrixXd& u,
                       const MatrixXd& dw, const QuadratureRule& rule) {
  const int n = lm.n;
  double total = 0.0;
  for (size_t q = 0; q < rule.nodes.size(); ++q) {
    const double r = rule.nodes[q];
    const MatrixXd xl = EulerLifted(lm, grid, x0, u, dw, r);
    double s = 0.0;
    for (int k = 0; k < grid.n_steps(); ++k) {
      const auto xs = xl.col(k).head(n);
      const auto ys = xl.col(k).tail(n);
      // x^T Q x with Q = [[0, Q~^T], [Q~, 0]] equals 2 y^T Q~ x.
      s += (2.0 * ys.dot(lm.q_tilde * xs) + 2.0 * r * u.col(k).squaredNorm()) *
           grid.dt(k);
    }
    const VectorXd xt = xl.col(grid.n_steps());
    s += xt.dot(lm.Q_bar * xt) + 2.0 * lm.p_vec.dot(xt);
    total += rule.weights[q] * s;
  }
  return total;
}

double PathLinearDerivative(const GeneralGameSpec& spec, const TimeGrid& grid,
                            const MatrixXd& x, const MatrixXd& u, int i, int h,
                            const VectorXd& dir) {
  const MatrixXd y = EulerSensitivity(spec, grid, x, h, dir);
  double s = 0.0;
  VectorXd gx, gu;
  for (int k = 0; k < grid.n_steps(); ++k) {
    spec.running->Gradient(i, grid.t(k), x.col(k), u.col(k), &gx, &gu);
    s += (gx.dot(y.col(k)) + dir(k) * gu(h)) * grid.dt(k);
  }
  const int last = grid.n_steps();
  s += spec.terminal->Gradient(i, x.col(last)).dot(y.col(last));
  return s;
}

double PathPotentialSensitivity(const GeneralGameSpec& spec,
                                const TimeGrid& grid, const MatrixXd& u,
                                const MatrixXd& dw, const QuadratureRule& rule) {
  const int n = spec.n_players;
  double total = 0.0;
  for (size_t q = 0; q < rule.nodes.size(); ++q) {
    const double r = rule.nodes[q];
    const MatrixXd ru = r * u;
    const MatrixXd x = EulerState(spec, grid, ru, dw);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += PathLinearDerivative(spec, grid, x, ru, i, i, u.row(i).transpose());
    }
    total += rule.weights[q] * s;
  }
  return total;
}

double PathSecondDerivative(const GeneralGameSpec& spec, const TimeGrid& grid,
                            const MatrixXd& x, const MatrixXd& u, int i, int h,
                            int l, const VectorXd& dir_h, const VectorXd& dir_l) {
  const MatrixXd yh = EulerSensitivity(spec, grid, x, h, dir_h);
  const MatrixXd yl = EulerSensitivity(spec, grid, x, l, dir_l);
  const MatrixXd z = EulerSecondSensitivity(spec, grid, x, yh, yl);
  double s = 0.0;
  VectorXd gx, gu;
  MatrixXd hxx, hxu, huu;
  for (int k = 0; k < grid.n_steps(); ++k) {
    const double t = grid.t(k);
    const VectorXd xk = x.col(k), uk = u.col(k);
    spec.running->Gradient(i, t, xk, uk, &gx, &gu);
    spec.running->Hessian(i, t, xk, uk, &hxx, &hxu, &huu);
    const VectorXd a = yh.col(k), b = yl.col(k);
    double quad = a.dot(hxx * b);
    quad += a.dot(hxu.col(l)) * dir_l(k);
    quad += dir_h(k) * hxu.col(h).dot(b);
    quad += dir_h(k) * huu(h, l) * dir_l(k);
    s += (quad + gx.dot(z.col(k))) * grid.dt(k);
  }
  const int last = grid.n_steps();
  const VectorXd xt = x.col(last);
  s += yh.col(last).dot(spec.terminal->Hessian(i, xt) * yl.col(last));
  s += spec.terminal->Gradient(i, xt).dot(z.col(last));
  return s;
}

McEstimate EstimateValue(const GeneralGameSpec& spec,
                         const StrategyProfile& profile,
                         const NoiseBatch& noise, int i) {
  return EstimateValues(spec, profile, noise)[i];
}

McEstimate EstimateValue(const LqGameSpec& spec, const StrategyProfile& profile,
                         const NoiseBatch& noise, int i) {
  return EstimateValue(ToGeneral(spec), profile, noise, i);
}

std::vector<McEstimate> EstimateValues(const GeneralGameSpec& spec,
                                       const StrategyProfile& profile,
                                       const NoiseBatch& noise) {
  CheckCompatible(spec.n_players, profile, noise);
  const int m = noise.n_paths(), n = spec.n_players;
  std::vector<VectorXd> per(m);
  ParallelFor(m, [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd u = profile.Realize(dw);
    const MatrixXd x = EulerState(spec, noise.grid(), u, dw);
    per[p] = PathValues(spec, noise.grid(), x, u);
  });
  std::vector<McEstimate> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> s(m);
    for (int p = 0; p < m; ++p) s[p] = per[p](i);
    out.push_back(FromSamples(s, noise, "value_v" + std::to_string(i + 1)));
  }
  return out;
}

McEstimate EstimatePotentialLq(const LqGameSpec& spec,
                               const StrategyProfile& profile,
                               const NoiseBatch& noise) {
  if (noise.r_mode() != RMode::kQuadrature) {
    throw Error("lifted potential estimator needs r quadrature nodes");
  }
  CheckCompatible(spec.n_players, profile, noise);
  const LiftedMatrices lm = BuildLiftedMatrices(spec);
  std::vector<double> s(noise.n_paths());
  ParallelFor(noise.n_paths(), [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd u = profile.Realize(dw);
    s[p] = PathPotentialLq(lm, noise.grid(), spec.x0, u, dw, noise.RRule());
  });
  return FromSamples(s, noise, "phi_lq_lifted");
}

McEstimate EstimatePotentialSensitivity(const GeneralGameSpec& spec,
                                        const StrategyProfile& profile,
                                        const NoiseBatch& noise,
                                        const QuadratureRule& rule) {
  CheckCompatible(spec.n_players, profile, noise);
  std::vector<double> s(noise.n_paths());
  ParallelFor(noise.n_paths(), [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd u = profile.Realize(dw);
    s[p] = PathPotentialSensitivity(spec, noise.grid(), u, dw, rule);
  });
  McEstimate e = FromSamples(s, noise, "phi_sensitivity");
  e.flags.push_back("sensitivity_solves=" +
                    std::to_string(spec.n_players * rule.nodes.size()) +
                    " per path");
  return e;
}

McEstimate EstimateLinearDerivative(const GeneralGameSpec& spec,
                                    const StrategyProfile& profile, int i,
                                    int h, const VectorXd& direction,
                                    const NoiseBatch& noise) {
  CheckCompatible(spec.n_players, profile, noise);
  if (direction.size() != noise.grid().n_steps()) {
    throw Error("direction must have n_steps entries");
  }
  std::vector<double> s(noise.n_paths());
  ParallelFor(noise.n_paths(), [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd u = profile.Realize(dw);
    const MatrixXd x = EulerState(spec, noise.grid(), u, dw);
    s[p] = PathLinearDerivative(spec, noise.grid(), x, u, i, h, direction);
  });
  return FromSamples(s, noise, "dV" + std::to_string(i + 1) + "/du" + std::to_string(h + 1));
}

McEstimate EstimateSecondDerivative(const GeneralGameSpec& spec,
                                    const StrategyProfile& profile, int i,
                                    int h, int l, const VectorXd& dir_h,
                                    const VectorXd& dir_l,
                                    const NoiseBatch& noise) {
  CheckCompatible(spec.n_players, profile, noise);
  std::vector<double> s(noise.n_paths());
  ParallelFor(noise.n_paths(), [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd u = profile.Realize(dw);
    const MatrixXd x = EulerState(spec, noise.grid(), u, dw);
    s[p] = PathSecondDerivative(spec, noise.grid(), x, u, i, h, l, dir_h, dir_l);
  });
  McEstimate e = FromSamples(s, noise,
                             "d2V" + std::to_string(i + 1) + "/du" +
                                 std::to_string(h + 1) + "du" + std::to_string(l + 1));
  if (h == l) e.flags.push_back("same-player second derivative: extension");
  return e;
}

}  // namespace apgame
