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

#include "apgame/general_game.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "apgame/errors.h"

namespace apgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---- LinearDrift ----

double LinearDrift::Value(int i, double t, double xi, const VectorXd&) const {
  return a_[i](t) * xi;
}
double LinearDrift::Dx(int i, double t, double, const VectorXd&) const {
  return a_[i](t);
}
VectorXd LinearDrift::Dy(int, double, double, const VectorXd& y) const {
  return VectorXd::Zero(y.size());
}
double LinearDrift::Dxx(int, double, double, const VectorXd&) const {
  return 0.0;
}
VectorXd LinearDrift::Dxy(int, double, double, const VectorXd& y) const {
  return VectorXd::Zero(y.size());
}
MatrixXd LinearDrift::Dyy(int, double, double, const VectorXd& y) const {
  return MatrixXd::Zero(y.size(), y.size());
}

// ---- MeanFieldDrift ----

MeanFieldDrift::MeanFieldDrift(Params p) : p_(std::move(p)) {
  const int n = static_cast<int>(p_.theta.size());
  if (p_.eps.size() != n || p_.lambda.size() != n || p_.c.size() != n ||
      p_.w.rows() != n || p_.w.cols() != n) {
    throw ConfigError("mean-field drift parameters must have length N",
                      "drift");
  }
  if (p_.w.cwiseAbs().maxCoeff() > 1.0) {
    throw ConfigError("mean-field drift weights must satisfy |w| <= 1",
                      "drift.w");
  }
}

double MeanFieldDrift::Mean(int i, const VectorXd& y) const {
  return p_.w.row(i).dot(y) / static_cast<double>(y.size());
}

double MeanFieldDrift::Value(int i, double, double x, const VectorXd& y) const {
  const double m = Mean(i, y);
  return -p_.theta(i) * x + p_.eps(i) * std::sin(x) +
         p_.lambda(i) * std::sin(m) + p_.c(i) * std::sin(x) * std::tanh(m);
}

double MeanFieldDrift::Dx(int i, double, double x, const VectorXd& y) const {
  const double m = Mean(i, y);
  return -p_.theta(i) + p_.eps(i) * std::cos(x) +
         p_.c(i) * std::cos(x) * std::tanh(m);
}

VectorXd MeanFieldDrift::Dy(int i, double, double x, const VectorXd& y) const {
  const double n = static_cast<double>(y.size());
  const double m = Mean(i, y);
  const double th = std::tanh(m);
  const double dm = p_.lambda(i) * std::cos(m) + p_.c(i) * std::sin(x) * (1 - th * th);
  return (dm / n) * p_.w.row(i).transpose();
}

double MeanFieldDrift::Dxx(int i, double, double x, const VectorXd& y) const {
  const double m = Mean(i, y);
  return -p_.eps(i) * std::sin(x) - p_.c(i) * std::sin(x) * std::tanh(m);
}

VectorXd MeanFieldDrift::Dxy(int i, double, double x, const VectorXd& y) const {
  const double n = static_cast<double>(y.size());
  const double th = std::tanh(Mean(i, y));
  return (p_.c(i) * std::cos(x) * (1 - th * th) / n) * p_.w.row(i).transpose();
}

MatrixXd MeanFieldDrift::Dyy(int i, double, double x, const VectorXd& y) const {
  const double n = static_cast<double>(y.size());
  const double m = Mean(i, y);
  const double th = std::tanh(m);
  const double s2 = 1 - th * th;
  const double d2 = -p_.lambda(i) * std::sin(m) - 2.0 * p_.c(i) * std::sin(x) * s2 * th;
  const VectorXd w = p_.w.row(i).transpose();
  return (d2 / (n * n)) * (w * w.transpose());
}

bool MeanFieldDrift::Decoupled() const {
  return p_.lambda.cwiseAbs().maxCoeff() == 0.0 &&
         p_.c.cwiseAbs().maxCoeff() == 0.0;
}

DriftBounds MeanFieldDrift::Bounds() const {
  DriftBounds b;
  b.l_b = (p_.theta.cwiseAbs() + p_.eps.cwiseAbs() + p_.c.cwiseAbs()).maxCoeff();
  b.l_b_y = (p_.lambda.cwiseAbs() + p_.c.cwiseAbs()).maxCoeff() *
            p_.w.cwiseAbs().maxCoeff();
  return b;
}

// ---- GraphQuadraticCost ----

GraphQuadraticCost::GraphQuadraticCost(MatrixXd q) : q_(std::move(q)) {
  q_.diagonal().setZero();
}

double GraphQuadraticCost::Value(int i, double, const VectorXd& x,
                                 const VectorXd& u) const {
  const int n = static_cast<int>(x.size());
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double dx = x(i) - x(j);
    s += q_(i, j) * dx * dx;
  }
  return u(i) * u(i) + s / n;
}

void GraphQuadraticCost::Gradient(int i, double, const VectorXd& x,
                                  const VectorXd& u, VectorXd* gx,
                                  VectorXd* gu) const {
  const int n = static_cast<int>(x.size());
  gx->setZero(n);
  gu->setZero(n);
  for (int j = 0; j < n; ++j) {
    const double c = 2.0 * q_(i, j) * (x(i) - x(j)) / n;
    (*gx)(i) += c;
    (*gx)(j) -= c;
  }
  (*gu)(i) = 2.0 * u(i);
}

void GraphQuadraticCost::Hessian(int i, double, const VectorXd& x,
                                 const VectorXd&, MatrixXd* hxx, MatrixXd* hxu,
                                 MatrixXd* huu) const {
  const int n = static_cast<int>(x.size());
  hxx->setZero(n, n);
  hxu->setZero(n, n);
  huu->setZero(n, n);
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const double c = 2.0 * q_(i, j) / n;
    (*hxx)(i, i) += c;
    (*hxx)(j, j) += c;
    (*hxx)(i, j) -= c;
    (*hxx)(j, i) -= c;
  }
  (*huu)(i, i) = 2.0;
}

// ---- TargetTerminalCost ----

double TargetTerminalCost::Value(int i, const VectorXd& x) const {
  const double e = x(i) - d_(i);
  return gamma_(i) * e * e;
}
VectorXd TargetTerminalCost::Gradient(int i, const VectorXd& x) const {
  VectorXd g = VectorXd::Zero(x.size());
  g(i) = 2.0 * gamma_(i) * (x(i) - d_(i));
  return g;
}
MatrixXd TargetTerminalCost::Hessian(int i, const VectorXd& x) const {
  MatrixXd h = MatrixXd::Zero(x.size(), x.size());
  h(i, i) = 2.0 * gamma_(i);
  return h;
}

// ---- Distributed costs ----

double DistributedRunningCost::Value(int i, double, const VectorXd& x,
                                     const VectorXd& u) const {
  const double m = x.mean();
  return 0.5 * p_.rho(i) * u(i) * u(i) + 0.5 * p_.kappa(i) * x(i) * x(i) +
         p_.lambda * m * m;
}

void DistributedRunningCost::Gradient(int i, double, const VectorXd& x,
                                      const VectorXd& u, VectorXd* gx,
                                      VectorXd* gu) const {
  const int n = static_cast<int>(x.size());
  gx->setConstant(n, 2.0 * p_.lambda * x.mean() / n);
  (*gx)(i) += p_.kappa(i) * x(i);
  gu->setZero(n);
  (*gu)(i) = p_.rho(i) * u(i);
}

void DistributedRunningCost::Hessian(int i, double, const VectorXd& x,
                                     const VectorXd&, MatrixXd* hxx,
                                     MatrixXd* hxu, MatrixXd* huu) const {
  const int n = static_cast<int>(x.size());
  hxx->setConstant(n, n, 2.0 * p_.lambda / (static_cast<double>(n) * n));
  (*hxx)(i, i) += p_.kappa(i);
  hxu->setZero(n, n);
  huu->setZero(n, n);
  (*huu)(i, i) = p_.rho(i);
}

double DistributedTerminalCost::Value(int i, const VectorXd& x) const {
  const double e = x(i) - p_.d(i);
  const double m = x.mean();
  return p_.gamma(i) * e * e + p_.mu * m * m;
}

VectorXd DistributedTerminalCost::Gradient(int i, const VectorXd& x) const {
  const int n = static_cast<int>(x.size());
  VectorXd g = VectorXd::Constant(n, 2.0 * p_.mu * x.mean() / n);
  g(i) += 2.0 * p_.gamma(i) * (x(i) - p_.d(i));
  return g;
}

MatrixXd DistributedTerminalCost::Hessian(int i, const VectorXd& x) const {
  const int n = static_cast<int>(x.size());
  MatrixXd h = MatrixXd::Constant(n, n, 2.0 * p_.mu / (static_cast<double>(n) * n));
  h(i, i) += 2.0 * p_.gamma(i);
  return h;
}

// ---- Mean-field costs ----

double MeanFieldRunningCost::Value(int i, double, const VectorXd& x,
                                   const VectorXd& u) const {
  const double n = static_cast<double>(x.size());
  const double mx = x.mean();
  const double mu = u.mean();
  const double e = mx - p_.theta(i);
  return (p_.kappa0 + p_.zeta(i)) * x.squaredNorm() / (2.0 * n) +
         0.5 * p_.rho(i) * u(i) * u(i) + p_.kappa(i) * e * e +
         p_.eta(i) * mx * mu;
}

void MeanFieldRunningCost::Gradient(int i, double, const VectorXd& x,
                                    const VectorXd& u, VectorXd* gx,
                                    VectorXd* gu) const {
  const double n = static_cast<double>(x.size());
  const double mx = x.mean();
  const double mu = u.mean();
  *gx = ((p_.kappa0 + p_.zeta(i)) / n) * x;
  gx->array() += (2.0 * p_.kappa(i) * (mx - p_.theta(i)) + p_.eta(i) * mu) / n;
  gu->setConstant(x.size(), p_.eta(i) * mx / n);
  (*gu)(i) += p_.rho(i) * u(i);
}

void MeanFieldRunningCost::Hessian(int i, double, const VectorXd& x,
                                   const VectorXd&, MatrixXd* hxx,
                                   MatrixXd* hxu, MatrixXd* huu) const {
  const int n = static_cast<int>(x.size());
  const double n2 = static_cast<double>(n) * n;
  hxx->setConstant(n, n, 2.0 * p_.kappa(i) / n2);
  hxx->diagonal().array() += (p_.kappa0 + p_.zeta(i)) / n;
  hxu->setConstant(n, n, p_.eta(i) / n2);
  huu->setZero(n, n);
  (*huu)(i, i) = p_.rho(i);
}

double MeanFieldTerminalCost::Value(int i, const VectorXd& x) const {
  const double n = static_cast<double>(x.size());
  const double e = x.mean() - p_.d(i);
  return p_.kappa0 * x.squaredNorm() / (2.0 * n) + p_.gamma(i) * e * e;
}

VectorXd MeanFieldTerminalCost::Gradient(int i, const VectorXd& x) const {
  const double n = static_cast<double>(x.size());
  VectorXd g = (p_.kappa0 / n) * x;
  g.array() += 2.0 * p_.gamma(i) * (x.mean() - p_.d(i)) / n;
  return g;
}

MatrixXd MeanFieldTerminalCost::Hessian(int i, const VectorXd& x) const {
  const int n = static_cast<int>(x.size());
  const double n2 = static_cast<double>(n) * n;
  MatrixXd h = MatrixXd::Constant(n, n, 2.0 * p_.gamma(i) / n2);
  h.diagonal().array() += p_.kappa0 / n;
  return h;
}

// ---- Validation ----

void Validate(const GeneralGameSpec& s) {
  const int n = s.n_players;
  if (n < 1) throw ConfigError("invariant violation: n_players < 1", "game.n_players");
  if (!(s.horizon > 0)) throw ConfigError("invariant violation: horizon <= 0", "game.horizon");
  if (!s.drift || !s.running || !s.terminal) {
    throw ConfigError("schema violation: drift and costs must be set", "game");
  }
  if (s.drift->n() != n || s.running->n() != n || s.terminal->n() != n ||
      static_cast<int>(s.sigma_fn.size()) != n || s.x0.size() != n) {
    throw ConfigError("schema violation: per-player fields must have length n_players", "game");
  }
  if (!(s.drift_bounds.l_b >= 0) || !(s.drift_bounds.l_b_y >= 0)) {
    throw ConfigError("invariant violation: drift bounds < 0", "game.drift_bounds");
  }
}

namespace {

double RelErr(double fd, double an) {
  return std::abs(fd - an) / std::max(1.0, std::abs(an));
}

struct Worst {
  double err = 0.0;
  std::string name;
  void Update(double e, const char* what) {
    if (e > err || !std::isfinite(e)) {
      err = std::isfinite(e) ? e : INFINITY;
      name = what;
    }
  }
};

}  // namespace

DerivativeCheckReport CheckDerivatives(const GeneralGameSpec& s, int samples,
                                       uint64_t seed, double rel_tol,
                                       double box) {
  Validate(s);
  const int n = s.n_players;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(-box, box), ut(0.0, s.horizon);
  Worst w;
  const double h = 1e-5;
  for (int k = 0; k < samples; ++k) {
    VectorXd x(n), u(n);
    for (int a = 0; a < n; ++a) {
      x(a) = ux(gen);
      u(a) = ux(gen);
    }
    const double t = ut(gen);
    for (int i = 0; i < n; ++i) {
      const DriftModel& b = *s.drift;
      // Own-slot derivatives.
      const double xi = x(i);
      w.Update(RelErr((b.Value(i, t, xi + h, x) - b.Value(i, t, xi - h, x)) / (2 * h),
                      b.Dx(i, t, xi, x)), "drift.dx");
      w.Update(RelErr((b.Dx(i, t, xi + h, x) - b.Dx(i, t, xi - h, x)) / (2 * h),
                      b.Dxx(i, t, xi, x)), "drift.dxx");
      const VectorXd dy = b.Dy(i, t, xi, x);
      const VectorXd dxy = b.Dxy(i, t, xi, x);
      const MatrixXd dyy = b.Dyy(i, t, xi, x);
      {
        const VectorXd p = b.Dy(i, t, xi + h, x), m = b.Dy(i, t, xi - h, x);
        for (int j = 0; j < n; ++j) {
          w.Update(RelErr((p(j) - m(j)) / (2 * h), dxy(j)), "drift.dxy");
        }
      }
      for (int j = 0; j < n; ++j) {
        VectorXd yp = x, ym = x;
        yp(j) += h;
        ym(j) -= h;
        w.Update(RelErr((b.Value(i, t, xi, yp) - b.Value(i, t, xi, ym)) / (2 * h), dy(j)),
                 "drift.dy");
        const VectorXd gp = b.Dy(i, t, xi, yp), gm = b.Dy(i, t, xi, ym);
        for (int l = 0; l < n; ++l) {
          w.Update(RelErr((gp(l) - gm(l)) / (2 * h), dyy(l, j)), "drift.dyy");
        }
      }
      // Running cost.
      const RunningCost& f = *s.running;
      VectorXd gx, gu;
      MatrixXd hxx, hxu, huu;
      f.Gradient(i, t, x, u, &gx, &gu);
      f.Hessian(i, t, x, u, &hxx, &hxu, &huu);
      for (int j = 0; j < n; ++j) {
        VectorXd xp = x, xm = x, up = u, um = u;
        xp(j) += h;
        xm(j) -= h;
        up(j) += h;
        um(j) -= h;
        w.Update(RelErr((f.Value(i, t, xp, u) - f.Value(i, t, xm, u)) / (2 * h), gx(j)),
                 "cost_f.dx");
        w.Update(RelErr((f.Value(i, t, x, up) - f.Value(i, t, x, um)) / (2 * h), gu(j)),
                 "cost_f.du");
        VectorXd gxp, gup, gxm, gum;
        f.Gradient(i, t, xp, u, &gxp, &gup);
        f.Gradient(i, t, xm, u, &gxm, &gum);
        for (int l = 0; l < n; ++l) {
          w.Update(RelErr((gxp(l) - gxm(l)) / (2 * h), hxx(l, j)), "cost_f.dxx");
          // d/dx_j of du_l is hxu(j, l)
          w.Update(RelErr((gup(l) - gum(l)) / (2 * h), hxu(j, l)), "cost_f.dxu");
        }
        f.Gradient(i, t, x, up, &gxp, &gup);
        f.Gradient(i, t, x, um, &gxm, &gum);
        for (int l = 0; l < n; ++l) {
          w.Update(RelErr((gup(l) - gum(l)) / (2 * h), huu(l, j)), "cost_f.duu");
        }
      }
      // Terminal cost.
      const TerminalCost& g = *s.terminal;
      const VectorXd gg = g.Gradient(i, x);
      const MatrixXd hg = g.Hessian(i, x);
      for (int j = 0; j < n; ++j) {
        VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        w.Update(RelErr((g.Value(i, xp) - g.Value(i, xm)) / (2 * h), gg(j)), "cost_g.dx");
        const VectorXd gp = g.Gradient(i, xp), gm = g.Gradient(i, xm);
        for (int l = 0; l < n; ++l) {
          w.Update(RelErr((gp(l) - gm(l)) / (2 * h), hg(l, j)), "cost_g.dxx");
        }
      }
    }
  }
  DerivativeCheckReport r;
  r.points = samples;
  r.max_rel_error = w.err;
  r.worst = w.name;
  r.ok = w.err <= rel_tol;
  return r;
}

DriftBoundsReport CheckDriftBounds(const GeneralGameSpec& s, int samples,
                                   uint64_t seed, double box) {
  Validate(s);
  const int n = s.n_players;
  const double lb = s.drift_bounds.l_b;
  const double ly = s.drift_bounds.l_b_y;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(-box, box), ut(0.0, s.horizon);
  Worst w;
  auto ratio = [](double v, double bound) {
    if (v == 0.0) return 0.0;
    return bound > 0 ? v / bound : INFINITY;
  };
  const VectorXd zero = VectorXd::Zero(n);
  for (int k = 0; k < samples; ++k) {
    VectorXd x(n);
    for (int a = 0; a < n; ++a) x(a) = ux(gen);
    const double t = ut(gen);
    for (int i = 0; i < n; ++i) {
      const DriftModel& b = *s.drift;
      w.Update(ratio(std::abs(b.Value(i, t, 0.0, zero)), lb), "b(t,0,0)");
      w.Update(ratio(std::abs(b.Dx(i, t, x(i), x)), lb), "dx");
      w.Update(ratio(std::abs(b.Dxx(i, t, x(i), x)), lb), "dxx");
      const VectorXd dy = b.Dy(i, t, x(i), x);
      const VectorXd dxy = b.Dxy(i, t, x(i), x);
      const MatrixXd dyy = b.Dyy(i, t, x(i), x);
      for (int j = 0; j < n; ++j) {
        w.Update(ratio(std::abs(dy(j)), ly / n), "dy");
        w.Update(ratio(std::abs(dxy(j)), ly / n), "dxy");
        for (int l = 0; l < n; ++l) {
          const double scale = j == l ? ly / n : ly / (static_cast<double>(n) * n);
          w.Update(ratio(std::abs(dyy(j, l)), scale), "dyy");
        }
      }
    }
  }
  DriftBoundsReport r;
  r.max_ratio = w.err;
  r.worst = w.name;
  r.ok = w.err <= 1.05;
  return r;
}

// ---- Factories ----

GeneralGameSpec ToGeneral(const LqGameSpec& spec) {
  Validate(spec);
  GeneralGameSpec g;
  g.n_players = spec.n_players;
  g.horizon = spec.horizon;
  g.drift = std::make_shared<LinearDrift>(spec.a_fn);
  g.sigma_fn = spec.sigma_fn;
  g.running = std::make_shared<GraphQuadraticCost>(spec.q);
  g.terminal = std::make_shared<TargetTerminalCost>(spec.gamma, spec.d);
  g.x0 = spec.x0;
  double lb = 0.0;
  for (const auto& a : spec.a_fn) lb = std::max(lb, a.SupAbs(spec.horizon));
  g.drift_bounds = {lb, 0.0};
  g.control_bound = spec.control_bound;
  return g;
}

GeneralGameSpec MakeDistributedExample(int n, double horizon) {
  GeneralGameSpec g;
  g.n_players = n;
  g.horizon = horizon;
  MeanFieldDrift::Params dp;
  dp.theta.resize(n);
  dp.eps.resize(n);
  dp.lambda = VectorXd::Zero(n);
  dp.c = VectorXd::Zero(n);
  dp.w = MatrixXd::Zero(n, n);
  DistributedCostParams cp;
  cp.rho.resize(n);
  cp.kappa.resize(n);
  cp.gamma.resize(n);
  cp.d.resize(n);
  cp.lambda = 0.7;
  cp.mu = 0.4;
  g.x0.resize(n);
  for (int i = 0; i < n; ++i) {
    dp.theta(i) = 0.5 + 0.25 * (i % 3);
    dp.eps(i) = 0.2 * std::cos(i);
    cp.rho(i) = 1.0 + 0.5 * (i % 2);
    cp.kappa(i) = 0.3 + 0.2 * std::sin(i);
    cp.gamma(i) = 1.0 + 0.25 * (i % 4);
    cp.d(i) = std::cos(1.3 * i);
    g.x0(i) = 0.5 * std::sin(i + 1.0);
  }
  auto drift = std::make_shared<MeanFieldDrift>(dp);
  g.drift_bounds = drift->Bounds();
  g.drift = drift;
  g.sigma_fn.assign(n, Coefficient::Constant(0.4));
  g.running = std::make_shared<DistributedRunningCost>(cp);
  g.terminal = std::make_shared<DistributedTerminalCost>(cp);
  return g;
}

GeneralGameSpec MakeMeanFieldExample(int n, double horizon) {
  GeneralGameSpec g;
  g.n_players = n;
  g.horizon = horizon;
  MeanFieldDrift::Params dp;
  dp.theta.resize(n);
  dp.eps.resize(n);
  dp.lambda.resize(n);
  dp.c.resize(n);
  dp.w.resize(n, n);
  MeanFieldCostParams cp;
  cp.kappa0 = 1.0;
  for (auto* v : {&cp.rho, &cp.kappa, &cp.theta, &cp.eta, &cp.zeta,
                  &cp.gamma, &cp.d}) {
    v->resize(n);
  }
  g.x0.resize(n);
  for (int i = 0; i < n; ++i) {
    dp.theta(i) = 0.5 + 0.25 * (i % 2);
    dp.eps(i) = 0.2;
    dp.lambda(i) = 0.3 + 0.1 * (i % 3);
    dp.c(i) = 0.1;
    for (int j = 0; j < n; ++j) dp.w(i, j) = 0.5 + 0.5 * std::cos(i + 2.0 * j);
    cp.rho(i) = 1.0 + 0.5 * (i % 2);
    cp.kappa(i) = 0.5 + 0.25 * (i % 3);
    cp.theta(i) = std::sin(i);
    cp.eta(i) = 0.2 * (i % 2);
    cp.zeta(i) = 0.3 + 0.1 * (i % 2);
    cp.gamma(i) = 1.0 + 0.5 * (i % 2);
    cp.d(i) = std::cos(i);
    g.x0(i) = 0.5 * std::sin(i + 1.0);
  }
  auto drift = std::make_shared<MeanFieldDrift>(dp);
  g.drift_bounds = drift->Bounds();
  g.drift = drift;
  g.sigma_fn.assign(n, Coefficient::Constant(0.5));
  g.running = std::make_shared<MeanFieldRunningCost>(cp);
  g.terminal = std::make_shared<MeanFieldTerminalCost>(cp);
  return g;
}

}  // namespace apgame
