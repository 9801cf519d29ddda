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

#ifndef APGAME_POTENTIAL_EVAL_H_
#define APGAME_POTENTIAL_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apgame/game_model.h"
#include "apgame/general_game.h"
#include "apgame/quadrature.h"
#include "apgame/sde_sim.h"
#include "json.hpp"

namespace apgame {

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int n_paths = 0;
  uint64_t seed = 0;
  std::string estimator_id;
  double horizon = 0.0;
  int n_steps = 0;
  std::vector<std::string> flags;

  nlohmann::json ToJson() const;
};

McEstimate FromSamples(const std::vector<double>& samples,
                       const NoiseBatch& noise, std::string id);

// ---- Per-path functionals ----

// Left-endpoint running cost plus terminal cost, for every player.
Eigen::VectorXd PathValues(const GeneralGameSpec& spec, const TimeGrid& grid,
                           const Eigen::MatrixXd& x, const Eigen::MatrixXd& u);

// r-quadrature of the lifted quadratic functional on one noise path.
double PathPotentialLq(const LiftedMatrices& lm, const TimeGrid& grid,
                       const Eigen::VectorXd& x0, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& dw, const QuadratureRule& rule);

// r-quadrature of sum_i dV_i/du_i(r u; u_i) on one noise path.
double PathPotentialSensitivity(const GeneralGameSpec& spec,
                                const TimeGrid& grid, const Eigen::MatrixXd& u,
                                const Eigen::MatrixXd& dw,
                                const QuadratureRule& rule);

// Pathwise linear derivative of V_i at u in direction dir for player h.
double PathLinearDerivative(const GeneralGameSpec& spec, const TimeGrid& grid,
                            const Eigen::MatrixXd& x, const Eigen::MatrixXd& u,
                            int i, int h, const Eigen::VectorXd& dir);

double PathSecondDerivative(const GeneralGameSpec& spec, const TimeGrid& grid,
                            const Eigen::MatrixXd& x, const Eigen::MatrixXd& u,
                            int i, int h, int l, const Eigen::VectorXd& dir_h,
                            const Eigen::VectorXd& dir_l);

// ---- Estimators ----

McEstimate EstimateValue(const GeneralGameSpec& spec,
                         const StrategyProfile& profile,
                         const NoiseBatch& noise, int i);
McEstimate EstimateValue(const LqGameSpec& spec, const StrategyProfile& profile,
                         const NoiseBatch& noise, int i);
std::vector<McEstimate> EstimateValues(const GeneralGameSpec& spec,
                                       const StrategyProfile& profile,
                                       const NoiseBatch& noise);

// Needs a quadrature-mode noise batch.
McEstimate EstimatePotentialLq(const LqGameSpec& spec,
                               const StrategyProfile& profile,
                               const NoiseBatch& noise);

McEstimate EstimatePotentialSensitivity(const GeneralGameSpec& spec,
                                        const StrategyProfile& profile,
                                        const NoiseBatch& noise,
                                        const QuadratureRule& rule);

McEstimate EstimateLinearDerivative(const GeneralGameSpec& spec,
                                    const StrategyProfile& profile, int i,
                                    int h, const Eigen::VectorXd& direction,
                                    const NoiseBatch& noise);

// h == l is computed with the same dynamics and flagged as an extension.
McEstimate EstimateSecondDerivative(const GeneralGameSpec& spec,
                                    const StrategyProfile& profile, int i,
                                    int h, int l, const Eigen::VectorXd& dir_h,
                                    const Eigen::VectorXd& dir_l,
                                    const NoiseBatch& noise);

}  // namespace apgame

#endif  // APGAME_POTENTIAL_EVAL_H_
