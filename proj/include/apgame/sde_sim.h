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

#ifndef APGAME_SDE_SIM_H_
#define APGAME_SDE_SIM_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apgame/column_store.h"
#include "apgame/game_model.h"
#include "apgame/general_game.h"
#include "apgame/ode_solvers.h"
#include "apgame/quadrature.h"
#include "apgame/rng.h"
#include "apgame/time_grid.h"

namespace apgame {

enum class RMode { kNone, kSampled, kQuadrature };

struct RSpec {
  RMode mode = RMode::kNone;
  int nodes = 0;
  static RSpec None() { return {}; }
  static RSpec Sampled() { return {RMode::kSampled, 0}; }
  static RSpec Quadrature(int k) { return {RMode::kQuadrature, k}; }
};

struct NoiseOptions {
  bool antithetic = false;  // path 2m+1 uses the negated increments of 2m
  bool shared_brownian = false;  // every path uses the increments of path 0
};

// Brownian increments generated on demand from (seed, path, step, dim).
class NoiseBatch {
 public:
  static NoiseBatch Make(uint64_t seed, int n_paths, const TimeGrid& grid,
                         int n_dims, RSpec r = RSpec::None(),
                         NoiseOptions opts = {});

  uint64_t seed() const { return seed_; }
  int n_paths() const { return n_paths_; }
  int n_dims() const { return n_dims_; }
  const TimeGrid& grid() const { return grid_; }
  RMode r_mode() const { return r_.mode; }
  const NoiseOptions& options() const { return opts_; }

  // n_dims x n_steps matrix of increments with variance dt_k.
  Eigen::MatrixXd Increments(int path) const;
  // Uniform draw for the path (sampled mode).
  double R(int path) const;
  const QuadratureRule& RRule() const { return rule_; }

  // Same batch with every increment of index >= step set to zero.
  NoiseBatch ZeroedFrom(int step) const;

  bool SameFamily(const NoiseBatch& o) const {
    return seed_ == o.seed_ && n_paths_ == o.n_paths_ && grid_ == o.grid_ &&
           n_dims_ == o.n_dims_ && zero_from_ == o.zero_from_;
  }

 private:
  uint64_t seed_ = 0;
  int n_paths_ = 0;
  int n_dims_ = 0;
  TimeGrid grid_;
  RSpec r_;
  NoiseOptions opts_;
  QuadratureRule rule_;
  int zero_from_ = -1;
};

// u* = -K F - I~ M2 with F driven by the closed linear SDE of the
// sufficient statistic.
class FeedbackLaw {
 public:
  // Riccati grid and target grid must share the horizon; values are
  // linearly interpolated onto the target knots.
  static std::shared_ptr<const FeedbackLaw> FromRiccati(
      const LqGameSpec& spec, const RiccatiSolution& sol,
      const TimeGrid& target);

  int n_players() const { return n_; }
  const TimeGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& Gain(int k) const { return gain_[k]; }
  const Eigen::VectorXd& Offset(int k) const { return offset_[k]; }

  // F: 4N x (steps + 1); u: N x steps. dw has N rows.
  void Run(const Eigen::MatrixXd& dw, Eigen::MatrixXd* f,
           Eigen::MatrixXd* u) const;

 private:
  int n_ = 0;
  TimeGrid grid_;
  Eigen::VectorXd f0_;
  std::vector<Eigen::MatrixXd> gain_;    // K(t_k)
  std::vector<Eigen::VectorXd> offset_;  // I~ M2(t_k)
  std::vector<Eigen::VectorXd> a_;       // a(t_k)
  std::vector<Eigen::VectorXd> sigma_;   // sigma(t_k)
  Eigen::MatrixXd i_tilde_;
};

// Open-loop causal control rule on a grid. Modifications only touch the
// named player's row.
class StrategyProfile {
 public:
  static StrategyProfile Deterministic(const TimeGrid& grid, Eigen::MatrixXd u);
  static StrategyProfile Feedback(std::shared_ptr<const FeedbackLaw> law);

  StrategyProfile Scaled(int player, double lambda) const;
  // u_player += eps * direction (length n_steps).
  StrategyProfile Shifted(int player, const Eigen::VectorXd& direction,
                          double eps) const;
  // u_player -= delta^T F_k; needs a feedback base.
  StrategyProfile GainTilted(int player, const Eigen::VectorXd& delta) const;

  int n_players() const { return n_; }
  const TimeGrid& grid() const { return grid_; }
  bool IsDeterministic() const { return law_ == nullptr; }
  bool HasFeedback() const { return law_ != nullptr; }
  const std::shared_ptr<const FeedbackLaw>& law() const { return law_; }
  // Players touched by modifications.
  std::vector<int> ModifiedPlayers() const;
  std::string Describe() const;

  // N x n_steps control matrix for one noise path (dw: N x n_steps).
  Eigen::MatrixXd Realize(const Eigen::MatrixXd& dw,
                          Eigen::MatrixXd* f_state = nullptr) const;

 private:
  struct Mod {
    enum Kind { kScale, kShift, kTilt } kind;
    int player;
    double scalar;
    Eigen::VectorXd vec;
  };
  int n_ = 0;
  TimeGrid grid_;
  Eigen::MatrixXd base_;  // deterministic base
  std::shared_ptr<const FeedbackLaw> law_;
  std::vector<Mod> mods_;
};

struct PathBundle {
  TimeGrid grid;
  uint64_t seed = 0;
  std::vector<Eigen::MatrixXd> x;        // N x (steps + 1)
  std::vector<Eigen::MatrixXd> u;        // N x steps
  std::vector<Eigen::MatrixXd> y;        // N x (steps + 1)
  std::vector<Eigen::MatrixXd> y_other;  // second direction for Z
  std::vector<Eigen::MatrixXd> z;        // N x (steps + 1)
  std::vector<Eigen::MatrixXd> f_state;  // 4N x (steps + 1)
  std::vector<Eigen::MatrixXd> lifted;   // 2N x (steps + 1)
  std::vector<double> r;

  int n_paths() const { return static_cast<int>(x.empty() ? lifted.size() : x.size()); }
  // Columns t, then <field>_p<path>_<row> for the first max_paths paths,
  // every stride-th knot.
  ColumnTable ToColumnTable(int max_paths, int stride = 1) const;
};

// ---- Per-path kernels ----

// Euler-Maruyama for the state; u is N x steps, dw N x steps.
Eigen::MatrixXd EulerState(const GeneralGameSpec& spec, const TimeGrid& grid,
                           const Eigen::MatrixXd& u, const Eigen::MatrixXd& dw);
// First-order sensitivity along x in direction dir for player h.
Eigen::MatrixXd EulerSensitivity(const GeneralGameSpec& spec,
                                 const TimeGrid& grid, const Eigen::MatrixXd& x,
                                 int h, const Eigen::VectorXd& dir);
// Second-order sensitivity from two first-order paths.
Eigen::MatrixXd EulerSecondSensitivity(const GeneralGameSpec& spec,
                                       const TimeGrid& grid,
                                       const Eigen::MatrixXd& x,
                                       const Eigen::MatrixXd& yh,
                                       const Eigen::MatrixXd& yl);
// Lifted pair (state under r u, sensitivity) for one r.
Eigen::MatrixXd EulerLifted(const LiftedMatrices& lm, const TimeGrid& grid,
                            const Eigen::VectorXd& x0, const Eigen::MatrixXd& u,
                            const Eigen::MatrixXd& dw, double r);

// ---- Batch simulation ----

PathBundle SimulateState(const GeneralGameSpec& spec,
                         const StrategyProfile& profile,
                         const NoiseBatch& noise);
PathBundle SimulateState(const LqGameSpec& spec, const StrategyProfile& profile,
                         const NoiseBatch& noise);
PathBundle SimulateSensitivityY(const GeneralGameSpec& spec,
                                const StrategyProfile& profile, int h,
                                const Eigen::VectorXd& direction,
                                const NoiseBatch& noise);
PathBundle SimulateSensitivityZ(const GeneralGameSpec& spec,
                                const StrategyProfile& profile, int h, int l,
                                const Eigen::VectorXd& dir_h,
                                const Eigen::VectorXd& dir_l,
                                const NoiseBatch& noise);
// Uses R(path) in sampled mode; in quadrature mode path p gets node
// p mod k.
PathBundle SimulateLifted(const LqGameSpec& spec, const StrategyProfile& profile,
                          const NoiseBatch& noise);
PathBundle SimulateFProcess(const LqGameSpec& spec, const RiccatiSolution& sol,
                            const NoiseBatch& noise);

// Throws unless profile and noise share the grid and dimensions.
void CheckCompatible(int n_players, const StrategyProfile& profile,
                     const NoiseBatch& noise);

}  // namespace apgame

#endif  // APGAME_SDE_SIM_H_
