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

#ifndef APGAME_GAME_MODEL_H_
#define APGAME_GAME_MODEL_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apgame/coefficient.h"
#include "json.hpp"

namespace apgame {

// Linear-quadratic game on a directed graph:
//   dX_i = (a_i(t) X_i + u_i) dt + sigma_i(t) dW^i
//   V_i  = E[ int (u_i^2 + (1/N) sum_j q_ij (X_i - X_j)^2) dt
//             + gamma_i (X_{T,i} - d_i)^2 ].
struct LqGameSpec {
  int n_players = 0;
  double horizon = 1.0;
  Eigen::MatrixXd q;  // diagonal stored as zero
  Eigen::VectorXd gamma;
  Eigen::VectorXd d;
  Eigen::VectorXd x0;
  std::vector<Coefficient> a_fn;
  std::vector<Coefficient> sigma_fn;
  double control_bound = 1e3;

  bool operator==(const LqGameSpec& o) const;
};

// Throws ConfigError on any invariant violation.
void Validate(const LqGameSpec& spec);

enum class Regime { kSymmetric, kExponential, kPowerLaw };

struct RegimeParams {
  std::vector<double> w;  // exponential / power law
  double beta = 0.5;      // power law
  double c = 1.0;         // symmetric constant
};

Regime ParseRegime(const std::string& name);
std::string RegimeName(Regime r);

// symmetric: q_ij = c; exponential: q_ij = w_i e^{-|i-j|};
// power law: q_ij = w_i |i-j|^{-beta}. Diagonal is zero.
Eigen::MatrixXd MakeRegimeWeights(Regime regime, int n,
                                  const RegimeParams& params);

// Distinct, bounded weights 1 + 0.5 (i mod 2) + 0.01 i / n with 1-based i.
std::vector<double> DefaultRegimeWeights(int n);

// Parses the "game" tree of a config (the root may hold it under "game").
LqGameSpec ParseGameSpec(const std::string& config_text);
LqGameSpec GameSpecFromJson(const nlohmann::json& root);
// Canonical form: explicit matrix weights, per-player coefficient lists.
nlohmann::json SerializeGameSpec(const LqGameSpec& spec);

struct LiftedMatrices {
  int n = 0;
  std::vector<Coefficient> a_fn;
  std::vector<Coefficient> sigma_fn;
  Eigen::MatrixXd q_tilde;  // N x N
  Eigen::MatrixXd Q;        // 2N x 2N, [[0, Q~^T], [Q~, 0]]
  Eigen::MatrixXd Q_bar;    // 2N x 2N, [[0, Gamma], [Gamma, 0]]
  Eigen::VectorXd p_vec;    // -vcat(0, gamma_i d_i)
  Eigen::MatrixXd I_tilde;  // N x 4N, [I/2, I, I/3, I/2]

  Eigen::VectorXd ADiag(double t) const;      // a_i(t), length N
  Eigen::VectorXd SigmaDiag(double t) const;  // sigma_i(t), length N
  Eigen::MatrixXd A(double t) const;          // diag(A~, A~)
  Eigen::MatrixXd Sigma(double t) const;      // vcat(diag sigma, 0)
};

LiftedMatrices BuildLiftedMatrices(const LqGameSpec& spec);

}  // namespace apgame

#endif  // APGAME_GAME_MODEL_H_
