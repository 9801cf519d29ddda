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

#ifndef APGAME_ALPHA_BOUNDS_H_
#define APGAME_ALPHA_BOUNDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apgame/game_model.h"
#include "apgame/general_game.h"
#include "json.hpp"

namespace apgame {

// Derivative norms of Df = f_i - f_j and Dg = g_i - g_j for an ordered pair.
struct CostDerivBounds {
  Eigen::MatrixXd d2f_xx;  // [h][l] = ||d2 Df / dx_h dx_l||
  Eigen::MatrixXd d2f_xu;  // [h][l] = ||d2 Df / dx_h du_l||
  double d2f_uu_ij = 0.0;  // ||d2 Df / du_i du_j||
  Eigen::VectorXd d1f_x0;  // [h] = time-L2 norm of (d Df / dx_h)(., 0, 0)
  Eigen::MatrixXd d2g_xx;  // [h][l] = ||d2 Dg / dx_h dx_l||
  Eigen::VectorXd d1g_x0;  // [h] = |(d Dg / dx_h)(0)|
  bool estimated = false;  // sampled rather than closed form

  static CostDerivBounds Zero(int n);
  int n() const { return static_cast<int>(d2f_xx.rows()); }
};

// Bounds for every ordered pair (i, j), i != j, stored at i * n + j.
struct PairBoundsTable {
  int n = 0;
  std::vector<std::optional<CostDerivBounds>> pairs;

  explicit PairBoundsTable(int n_players = 0)
      : n(n_players), pairs(static_cast<size_t>(n_players) * n_players) {}
  void Set(int i, int j, CostDerivBounds b) { pairs[i * n + j] = std::move(b); }
  const std::optional<CostDerivBounds>& Get(int i, int j) const {
    return pairs[i * n + j];
  }
};

struct CvConstants {
  double c_v1 = 0.0;
  double c_v2 = 0.0;
  double c_v3 = 0.0;
};

struct AlphaBoundBreakdown {
  int n_players = 0;
  double l_b_y = 0.0;
  double envelope_c = 1.0;
  // max_i sum_{j != i} [c_v1 + l_b_y (c_v2 / N + c_v3 / N^2)]
  double structural_prefactor = 0.0;
  double bound = 0.0;
  int argmax_player = 0;
  // sum_{j != i} of each constant for i = argmax_player, so that
  // structural_prefactor = c_v1 + l_b_y (c_v2 / N + c_v3 / N^2).
  double c_v1 = 0.0;
  double c_v2 = 0.0;
  double c_v3 = 0.0;
  std::vector<double> per_player;  // the summed prefactor for each i
  bool estimated = false;

  nlohmann::json ToJson() const;
};

// max_i sum_{j != i} |q_ji - q_ij|.
double AsymmetryIndex(const Eigen::MatrixXd& q);

// envelope_c * AsymmetryIndex(q) / N.
double LqAlphaBound(const LqGameSpec& spec, double envelope_c);

CvConstants ComputeCvConstants(const CostDerivBounds& b, int i, int j, int n);

AlphaBoundBreakdown TheoremAlphaBound(const PairBoundsTable& table,
                                      const DriftBounds& drift, int n,
                                      double envelope_c);

// Closed-form pair bounds for the LQ graph cost.
CostDerivBounds LqCostBounds(const LqGameSpec& spec, int i, int j);
PairBoundsTable LqPairBounds(const LqGameSpec& spec);

struct SupNormOptions {
  int samples = 10000;
  double box = 5.0;
  int time_steps = 0;  // 0: TimeGrid::Default
  uint64_t seed = 0;   // skips this many Sobol points
};

// Sampled sup-norms of the registered cost derivatives over
// [-box, box]^{2N} x [0, T] (Sobol points), for all ordered pairs.
PairBoundsTable EstimatePairBounds(const GeneralGameSpec& spec,
                                   const SupNormOptions& opts = {});

// Moment bound constant for E|X_{t,i}|^p.
struct MomentInputs {
  Eigen::VectorXd x0;          // initial states
  Eigen::VectorXd sigma_lp;    // ||sigma_k||_{L^p}
  Eigen::VectorXd u_norm;      // ||u_k|| (H^p norm)
  double horizon = 1.0;
};

double MomentConstantCp(double p);
double MomentBoundX(const DriftBounds& drift, const MomentInputs& in, int i,
                    double p);
double MomentBoundY(const DriftBounds& drift, double horizon, double p, int n,
                    bool is_own, double u_norm);
double MomentBoundZShape(const DriftBounds& drift, int n, bool delta_h,
                         bool delta_l, int h, int l, double u_norm_h,
                         double u_norm_l);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int used = 0;
  std::vector<int> dropped;  // indices of nonpositive inputs
  bool flagged = false;
};

// Least squares on (log N, log alpha).
DecayFit RegimeDecayFit(const std::vector<double>& n_values,
                        const std::vector<double>& alpha_values);

}  // namespace apgame

#endif  // APGAME_ALPHA_BOUNDS_H_
