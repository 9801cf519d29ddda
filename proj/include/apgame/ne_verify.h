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

#ifndef APGAME_NE_VERIFY_H_
#define APGAME_NE_VERIFY_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apgame/game_model.h"
#include "apgame/general_game.h"
#include "apgame/ode_solvers.h"
#include "apgame/potential_eval.h"
#include "apgame/quadrature.h"
#include "apgame/sde_sim.h"
#include "json.hpp"

namespace apgame {

enum class DeviationKind {
  kScaled,
  kTimeBump,
  kFeedbackTilt,
  kRandomPath,
  kGradientTilt,
};

std::string DeviationKindName(DeviationKind k);
DeviationKind ParseDeviationKind(const std::string& s);

struct Deviation {
  int player = 0;
  DeviationKind kind = DeviationKind::kScaled;
  StrategyProfile profile;
  std::string label;
  bool clipped = false;
};

struct DeviationOptions {
  double amplitude = 1.0;
  double control_bound = std::numeric_limits<double>::infinity();
};

// Seeded unilateral deviations of `player` around `base`. Shift-type
// deviations of a deterministic base are clipped to the control bound.
std::vector<Deviation> SampleDeviations(const StrategyProfile& base, int player,
                                        DeviationKind kind, int count,
                                        uint64_t seed,
                                        const DeviationOptions& opts = {});

// Steepest-descent tilts: the first variation of V_player is measured on
// `blocks` piecewise-constant time blocks and the player's control is
// shifted against it with geometrically shrinking step sizes.
std::vector<Deviation> GradientTiltDeviations(const GeneralGameSpec& spec,
                                              const StrategyProfile& base,
                                              int player, int count,
                                              const NoiseBatch& noise,
                                              const DeviationOptions& opts = {},
                                              int blocks = 16);

struct PhiEvaluator {
  std::string id;
  TimeGrid grid;
  std::function<double(const Eigen::MatrixXd& u, const Eigen::MatrixXd& dw)> path;
};

PhiEvaluator LiftedPhi(const LqGameSpec& spec, const TimeGrid& grid,
                       const QuadratureRule& rule);
PhiEvaluator SensitivityPhi(const GeneralGameSpec& spec, const TimeGrid& grid,
                            const QuadratureRule& rule);

enum class Verdict { kConsistent, kViolated, kInconclusive };
std::string VerdictName(Verdict v);

struct DeviationTrial {
  int player = 0;
  std::string kind;
  std::string label;
  McEstimate d_v;
  McEstimate d_phi;
  double gap = 0.0;
  double gap_std_error = 0.0;
  bool clipped = false;
};

struct AlphaCheckReport {
  std::vector<DeviationTrial> trials;
  double max_gap = 0.0;
  double max_gap_std_error = 0.0;
  int argmax_trial = -1;
  double alpha_reference = 0.0;
  double slack = 0.0;
  double z = 3.0;
  Verdict verdict = Verdict::kConsistent;

  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// Bonferroni-corrected two-sided critical value matching a 3 sigma level
// for a single comparison.
double BonferroniZ(int comparisons);

AlphaCheckReport CheckAlphaPotential(const GeneralGameSpec& spec,
                                     const StrategyProfile& base,
                                     const std::vector<Deviation>& deviations,
                                     const NoiseBatch& noise,
                                     const PhiEvaluator& phi,
                                     double alpha_reference, double slack = 0.0);

struct PlayerImprovement {
  int player = 0;
  double improvement = -std::numeric_limits<double>::infinity();
  double std_error = 0.0;
  std::string best_label;
  int n_trials = 0;
  int n_clipped = 0;
  Verdict verdict = Verdict::kConsistent;
};

struct NeBudget {
  int scaled = 40;
  int time_bump = 40;
  int feedback_tilt = 40;
  int random_path = 40;
  int gradient_tilt = 40;
  uint64_t seed = 1;
  DeviationOptions options;
};

struct NeReport {
  std::string control_id;
  std::vector<PlayerImprovement> players;
  double alpha_reference = 0.0;
  double slack = 0.0;
  double z = 3.0;
  Verdict verdict = Verdict::kConsistent;

  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// Improvements V_i(base) - V_i(deviation) on common noise.
NeReport CheckNe(const GeneralGameSpec& spec, const StrategyProfile& base,
                 const std::vector<Deviation>& deviations,
                 const NoiseBatch& noise, double alpha_reference, double slack,
                 std::string control_id);

// Feedback control from the Riccati solution against the sampled budget.
NeReport CheckEpsilonNe(const LqGameSpec& spec, const RiccatiSolution& sol,
                        const NeBudget& budget, const NoiseBatch& noise,
                        double alpha_reference, double slack);

struct RefinementBiasReport {
  int n_steps = 0;
  double max_abs_delta = 0.0;
  double std_error = 0.0;
  std::vector<double> delta;  // V_i(coarse) - V_i(fine) per player
};

// Values of the feedback control on n_steps and 2 n_steps knots, with the
// coarse increments summed from the fine ones.
RefinementBiasReport RefinementBias(const LqGameSpec& spec, int n_steps,
                                    int n_paths, uint64_t seed);

struct DiscreteOptimum {
  Eigen::MatrixXd u;  // 1 x n_steps
  double value = 0.0;
};

// Exact minimiser of the Euler-discretised noise-free single-player cost.
DiscreteOptimum SinglePlayerDiscreteOptimum(const LqGameSpec& spec,
                                            const TimeGrid& grid);

}  // namespace apgame

#endif  // APGAME_NE_VERIFY_H_
