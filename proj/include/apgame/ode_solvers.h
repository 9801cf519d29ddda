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

#ifndef APGAME_ODE_SOLVERS_H_
#define APGAME_ODE_SOLVERS_H_

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "apgame/column_store.h"
#include "apgame/game_model.h"
#include "apgame/time_grid.h"

namespace apgame {

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y,
                                  Eigen::VectorXd* dydt)>;
// Applied to the state after every step (e.g. symmetrization).
using StepHook = std::function<void(Eigen::VectorXd* y)>;

// Classical RK4 marching from T down to 0, one step per grid interval.
// Returns the path in forward knot order. Throws BlowUpError when an entry
// is non-finite or exceeds 1e12 in magnitude.
std::vector<Eigen::VectorXd> IntegrateBackward(const OdeRhs& rhs,
                                               const Eigen::VectorXd& terminal,
                                               const TimeGrid& grid,
                                               const StepHook& hook = {});

struct ResidualReport {
  // max over interior knots of the Frobenius norm of
  // (M_{k+1} - M_{k-1}) / (t_{k+1} - t_{k-1}) - rhs(t_k, M_k).
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  // max Frobenius norm of the solution, for scale.
  double m0_scale = 0.0;
  double m1_scale = 0.0;
  double m2_scale = 0.0;
  double m3_scale = 0.0;
};

struct RiccatiSolution {
  TimeGrid grid;
  std::vector<Eigen::MatrixXd> m0;  // 2N x 2N
  std::vector<Eigen::MatrixXd> m1;  // 4N x 4N
  std::vector<Eigen::VectorXd> m2;  // 4N
  std::vector<double> m3;
  std::vector<Eigen::MatrixXd> k_gain;  // N x 4N
  ResidualReport residual;
};

// Right-hand sides of the matrix equations written as dM/dt = F(t, M).
Eigen::MatrixXd M0Derivative(const LiftedMatrices& lm, double t,
                             const Eigen::MatrixXd& m0);
Eigen::MatrixXd M1Derivative(const LiftedMatrices& lm, double t,
                             const Eigen::MatrixXd& m0,
                             const Eigen::MatrixXd& m1);
Eigen::VectorXd M2Derivative(const LiftedMatrices& lm, double t,
                             const Eigen::MatrixXd& m0,
                             const Eigen::MatrixXd& m1,
                             const Eigen::VectorXd& m2);
// Integrand of M3, so that dM3/dt = -M3Source.
double M3Source(const LiftedMatrices& lm, double t, const Eigen::MatrixXd& m0,
                const Eigen::MatrixXd& m1, const Eigen::VectorXd& m2);

std::vector<Eigen::MatrixXd> SolveM0(const LiftedMatrices& lm,
                                     const TimeGrid& grid);
std::vector<Eigen::MatrixXd> SolveM1(const LiftedMatrices& lm,
                                     const std::vector<Eigen::MatrixXd>& m0,
                                     const TimeGrid& grid);
std::vector<Eigen::VectorXd> SolveM2(const LiftedMatrices& lm,
                                     const std::vector<Eigen::MatrixXd>& m0,
                                     const std::vector<Eigen::MatrixXd>& m1,
                                     const TimeGrid& grid);
std::vector<double> SolveM3(const LiftedMatrices& lm,
                            const std::vector<Eigen::MatrixXd>& m0,
                            const std::vector<Eigen::MatrixXd>& m1,
                            const std::vector<Eigen::VectorXd>& m2,
                            const TimeGrid& grid);

// [(0 I) M0 | (I 0) M0] + I~ M1.
Eigen::MatrixXd AssembleGain(const Eigen::MatrixXd& m0,
                             const Eigen::MatrixXd& m1,
                             const LiftedMatrices& lm);

RiccatiSolution SolveRiccati(const LiftedMatrices& lm, const TimeGrid& grid);
RiccatiSolution SolveRiccati(const LqGameSpec& spec, const TimeGrid& grid);

// Minimal value of the lifted control problem started at x0.
double OptimalPotentialValue(const RiccatiSolution& sol, const LqGameSpec& spec);

ColumnTable ToColumnTable(const RiccatiSolution& sol);
// One row per knot with a few entries of each equation.
ColumnTable ToPlotTable(const RiccatiSolution& sol);

}  // namespace apgame

#endif  // APGAME_ODE_SOLVERS_H_
