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

#ifndef APGAME_GENERAL_GAME_H_
#define APGAME_GENERAL_GAME_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apgame/coefficient.h"
#include "apgame/game_model.h"

namespace apgame {

// Drift b_i(t, x_i, y) where x_i is the player's own state slot and y the
// full state vector. Along a trajectory both are evaluated at X_t.
class DriftModel {
 public:
  virtual ~DriftModel() = default;
  virtual int n() const = 0;
  virtual double Value(int i, double t, double xi,
                       const Eigen::VectorXd& y) const = 0;
  virtual double Dx(int i, double t, double xi,
                    const Eigen::VectorXd& y) const = 0;
  virtual Eigen::VectorXd Dy(int i, double t, double xi,
                             const Eigen::VectorXd& y) const = 0;
  virtual double Dxx(int i, double t, double xi,
                     const Eigen::VectorXd& y) const = 0;
  virtual Eigen::VectorXd Dxy(int i, double t, double xi,
                              const Eigen::VectorXd& y) const = 0;
  virtual Eigen::MatrixXd Dyy(int i, double t, double xi,
                              const Eigen::VectorXd& y) const = 0;
  // True when every Dy, Dxy, Dyy vanishes identically.
  virtual bool Decoupled() const { return false; }
  // True when Dxx, Dxy, Dyy vanish identically.
  virtual bool Linear() const { return false; }
};

// f_i(t, x, u) with x, u in R^N.
class RunningCost {
 public:
  virtual ~RunningCost() = default;
  virtual int n() const = 0;
  virtual double Value(int i, double t, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u) const = 0;
  virtual void Gradient(int i, double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u, Eigen::VectorXd* gx,
                        Eigen::VectorXd* gu) const = 0;
  virtual void Hessian(int i, double t, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u, Eigen::MatrixXd* hxx,
                       Eigen::MatrixXd* hxu, Eigen::MatrixXd* huu) const = 0;
};

// g_i(x).
class TerminalCost {
 public:
  virtual ~TerminalCost() = default;
  virtual int n() const = 0;
  virtual double Value(int i, const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd Gradient(int i, const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd Hessian(int i, const Eigen::VectorXd& x) const = 0;
};

// |b(t,0,0)|, |Dx b|, |Dxx b| <= l_b;
// |Dy_j b_i|, |Dxy_j b_i| <= l_b_y / N; |Dyy_jk b_i| <= l_b_y / N (j = k)
// and l_b_y / N^2 (j != k).
struct DriftBounds {
  double l_b = 0.0;
  double l_b_y = 0.0;
};

struct GeneralGameSpec {
  int n_players = 0;
  double horizon = 1.0;
  std::shared_ptr<const DriftModel> drift;
  std::vector<Coefficient> sigma_fn;
  std::shared_ptr<const RunningCost> running;
  std::shared_ptr<const TerminalCost> terminal;
  Eigen::VectorXd x0;
  DriftBounds drift_bounds;
  double control_bound = std::numeric_limits<double>::infinity();
};

// Structural checks (dimensions, non-null evaluators, bounds >= 0).
void Validate(const GeneralGameSpec& spec);

struct DerivativeCheckReport {
  int points = 0;
  double max_rel_error = 0.0;
  std::string worst;  // name of the worst derivative family
  bool ok = true;
};

// Compares every registered derivative with central differences of the
// next-lower evaluator at random points in [-box, box]^N x [0, T].
// Error is |fd - analytic| / max(1, |analytic|).
DerivativeCheckReport CheckDerivatives(const GeneralGameSpec& spec,
                                       int samples, uint64_t seed,
                                       double rel_tol = 1e-5,
                                       double box = 2.0);

struct DriftBoundsReport {
  double max_ratio = 0.0;  // largest sampled |derivative| / stated bound
  std::string worst;
  bool ok = true;  // max_ratio <= 1.05
};

DriftBoundsReport CheckDriftBounds(const GeneralGameSpec& spec, int samples,
                                   uint64_t seed, double box = 5.0);

// ---- Concrete drifts ----

// b_i = a_i(t) x_i.
class LinearDrift : public DriftModel {
 public:
  explicit LinearDrift(std::vector<Coefficient> a) : a_(std::move(a)) {}
  int n() const override { return static_cast<int>(a_.size()); }
  double Value(int i, double t, double xi,
               const Eigen::VectorXd& y) const override;
  double Dx(int i, double t, double xi,
            const Eigen::VectorXd& y) const override;
  Eigen::VectorXd Dy(int i, double t, double xi,
                     const Eigen::VectorXd& y) const override;
  double Dxx(int i, double t, double xi,
             const Eigen::VectorXd& y) const override;
  Eigen::VectorXd Dxy(int i, double t, double xi,
                      const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd Dyy(int i, double t, double xi,
                      const Eigen::VectorXd& y) const override;
  bool Decoupled() const override { return true; }
  bool Linear() const override { return true; }

 private:
  std::vector<Coefficient> a_;
};

// b_i = -theta_i x + eps_i sin x + lambda_i sin m_i + c_i sin x tanh m_i,
// m_i = (1/N) sum_j w_ij y_j with |w_ij| <= 1.
class MeanFieldDrift : public DriftModel {
 public:
  struct Params {
    Eigen::VectorXd theta, eps, lambda, c;
    Eigen::MatrixXd w;
  };
  explicit MeanFieldDrift(Params p);
  int n() const override { return static_cast<int>(p_.theta.size()); }
  double Value(int i, double t, double xi,
               const Eigen::VectorXd& y) const override;
  double Dx(int i, double t, double xi,
            const Eigen::VectorXd& y) const override;
  Eigen::VectorXd Dy(int i, double t, double xi,
                     const Eigen::VectorXd& y) const override;
  double Dxx(int i, double t, double xi,
             const Eigen::VectorXd& y) const override;
  Eigen::VectorXd Dxy(int i, double t, double xi,
                      const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd Dyy(int i, double t, double xi,
                      const Eigen::VectorXd& y) const override;
  bool Decoupled() const override;
  // Bounds implied by the parameters.
  DriftBounds Bounds() const;

 private:
  double Mean(int i, const Eigen::VectorXd& y) const;
  Params p_;
};

// ---- Concrete costs ----

// f_i = u_i^2 + (1/N) sum_j q_ij (x_i - x_j)^2.
class GraphQuadraticCost : public RunningCost {
 public:
  explicit GraphQuadraticCost(Eigen::MatrixXd q);
  int n() const override { return static_cast<int>(q_.rows()); }
  double Value(int i, double t, const Eigen::VectorXd& x,
               const Eigen::VectorXd& u) const override;
  void Gradient(int i, double t, const Eigen::VectorXd& x,
                const Eigen::VectorXd& u, Eigen::VectorXd* gx,
                Eigen::VectorXd* gu) const override;
  void Hessian(int i, double t, const Eigen::VectorXd& x,
               const Eigen::VectorXd& u, Eigen::MatrixXd* hxx,
               Eigen::MatrixXd* hxu, Eigen::MatrixXd* huu) const override;

 private:
  Eigen::MatrixXd q_;
};

// g_i = gamma_i (x_i - d_i)^2.
class TargetTerminalCost : public TerminalCost {
 public:
  TargetTerminalCost(Eigen::VectorXd gamma, Eigen::VectorXd d)
      : gamma_(std::move(gamma)), d_(std::move(d)) {}
  int n() const override { return static_cast<int>(gamma_.size()); }
  double Value(int i, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd Gradient(int i, const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd Hessian(int i, const Eigen::VectorXd& x) const override;

 private:
  Eigen::VectorXd gamma_, d_;
};

// Costs interacting only through a common mean-field term:
//   f_i = rho_i u_i^2 / 2 + kappa_i x_i^2 / 2 + lambda m_x^2
//   g_i = gamma_i (x_i - d_i)^2 + mu m_x^2
struct DistributedCostParams {
  Eigen::VectorXd rho, kappa, gamma, d;
  double lambda = 0.0;
  double mu = 0.0;
};

class DistributedRunningCost : public RunningCost {
 public:
  explicit DistributedRunningCost(DistributedCostParams p) : p_(std::move(p)) {}
  int n() const override { return static_cast<int>(p_.rho.size()); }
  double Value(int i, double t, const Eigen::VectorXd& x,
               const Eigen::VectorXd& u) const override;
  void Gradient(int i, double t, const Eigen::VectorXd& x,
                const Eigen::VectorXd& u, Eigen::VectorXd* gx,
                Eigen::VectorXd* gu) const override;
  void Hessian(int i, double t, const Eigen::VectorXd& x,
               const Eigen::VectorXd& u, Eigen::MatrixXd* hxx,
               Eigen::MatrixXd* hxu, Eigen::MatrixXd* huu) const override;

 private:
  DistributedCostParams p_;
};

class DistributedTerminalCost : public TerminalCost {
 public:
  explicit DistributedTerminalCost(DistributedCostParams p)
      : p_(std::move(p)) {}
  int n() const override { return static_cast<int>(p_.rho.size()); }
  double Value(int i, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd Gradient(int i, const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd Hessian(int i, const Eigen::VectorXd& x) const override;

 private:
  DistributedCostParams p_;
};

// Costs depending on the joint state only through empirical means:
//   f_i = kappa0/(2N) |x|^2 + rho_i u_i^2 / 2 + kappa_i (m_x - theta_i)^2
//         + eta_i m_x m_u + zeta_i/(2N) |x|^2
//   g_i = kappa0/(2N) |x|^2 + gamma_i (m_x - d_i)^2
struct MeanFieldCostParams {
  double kappa0 = 0.0;
  Eigen::VectorXd rho, kappa, theta, eta, zeta, gamma, d;
};

class MeanFieldRunningCost : public RunningCost {
 public:
  explicit MeanFieldRunningCost(MeanFieldCostParams p) : p_(std::move(p)) {}
  int n() const override { return static_cast<int>(p_.rho.size()); }
  double Value(int i, double t, const Eigen::VectorXd& x,
               const Eigen::VectorXd& u) const override;
  void Gradient(int i, double t, const Eigen::VectorXd& x,
                const Eigen::VectorXd& u, Eigen::VectorXd* gx,
                Eigen::VectorXd* gu) const override;
  void Hessian(int i, double t, const Eigen::VectorXd& x,
               const Eigen::VectorXd& u, Eigen::MatrixXd* hxx,
               Eigen::MatrixXd* hxu, Eigen::MatrixXd* huu) const override;

 private:
  MeanFieldCostParams p_;
};

class MeanFieldTerminalCost : public TerminalCost {
 public:
  explicit MeanFieldTerminalCost(MeanFieldCostParams p) : p_(std::move(p)) {}
  int n() const override { return static_cast<int>(p_.rho.size()); }
  double Value(int i, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd Gradient(int i, const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd Hessian(int i, const Eigen::VectorXd& x) const override;

 private:
  MeanFieldCostParams p_;
};

// The LQ game written in general form (linear drift, graph costs).
GeneralGameSpec ToGeneral(const LqGameSpec& spec);

// Decoupled drift with distributed costs; heterogeneous but alpha = 0.
GeneralGameSpec MakeDistributedExample(int n, double horizon);
// Mean-field drift and costs with heterogeneous, bounded coefficients.
GeneralGameSpec MakeMeanFieldExample(int n, double horizon);

}  // namespace apgame

#endif  // APGAME_GENERAL_GAME_H_
