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

#include "apgame/ode_solvers.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "apgame/errors.h"

namespace apgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd Flat(const MatrixXd& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

MatrixXd Unflat(const VectorXd& v, int rows) {
  return Eigen::Map<const MatrixXd>(v.data(), rows, v.size() / rows);
}

void SymmetrizeFlat(VectorXd* v, int rows) {
  Eigen::Map<MatrixXd> m(v->data(), rows, rows);
  const MatrixXd s = 0.5 * (m + m.transpose());
  m = s;
}

// Cubic Hermite interpolation of a knot path with known derivatives.
class HermitePath {
 public:
  HermitePath(const TimeGrid& grid, std::vector<VectorXd> y,
              std::vector<VectorXd> dy)
      : grid_(grid), y_(std::move(y)), dy_(std::move(dy)) {}

  VectorXd operator()(double t) const {
    const int k = grid_.Locate(t);
    const double h = grid_.dt(k);
    const double s = (t - grid_.t(k)) / h;
    if (s == 0.0) return y_[k];
    if (s == 1.0) return y_[k + 1];
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * h * dy_[k] +
           (-2 * s3 + 3 * s2) * y_[k + 1] + (s3 - s2) * h * dy_[k + 1];
  }

 private:
  const TimeGrid& grid_;
  std::vector<VectorXd> y_, dy_;
};

void CheckGrid(const TimeGrid& grid, size_t n) {
  if (static_cast<size_t>(grid.n_knots()) != n) {
    throw Error("path length does not match the grid");
  }
}

}  // namespace

std::vector<VectorXd> IntegrateBackward(const OdeRhs& rhs,
                                        const VectorXd& terminal,
                                        const TimeGrid& grid,
                                        const StepHook& hook) {
  const int n = grid.n_steps();
  std::vector<VectorXd> path(n + 1);
  path[n] = terminal;
  VectorXd k1, k2, k3, k4, y = terminal;
  for (int k = n - 1; k >= 0; --k) {
    const double t = grid.t(k + 1);
    const double h = grid.dt(k);
    rhs(t, y, &k1);
    if (k1.size() != y.size()) throw Error("rhs dimension differs from terminal");
    rhs(t - 0.5 * h, y - 0.5 * h * k1, &k2);
    rhs(t - 0.5 * h, y - 0.5 * h * k2, &k3);
    rhs(grid.t(k), y - h * k3, &k4);
    y -= (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (hook) hook(&y);
    const bool bad = !y.allFinite() || y.cwiseAbs().maxCoeff() > 1e12;
    if (bad) {
      std::ostringstream msg;
      msg << "backward integration blew up at knot " << k << " (t = "
          << grid.t(k) << ")";
      throw BlowUpError(msg.str(), k, grid.t(k));
    }
    path[k] = y;
  }
  return path;
}

MatrixXd M0Derivative(const LiftedMatrices& lm, double t, const MatrixXd& m0) {
  Eigen::VectorXd a(2 * lm.n);
  a << lm.ADiag(t), lm.ADiag(t);
  // A is diagonal: A^T M0 + M0 A = diag(a) M0 + M0 diag(a).
  MatrixXd r = a.asDiagonal() * m0;
  r += m0 * a.asDiagonal();
  r += lm.Q;
  return -r;
}

MatrixXd AssembleGain(const MatrixXd& m0, const MatrixXd& m1,
                      const LiftedMatrices& lm) {
  const int n = lm.n;
  if (m0.rows() != 2 * n || m0.cols() != 2 * n || m1.rows() != 4 * n ||
      m1.cols() != 4 * n) {
    throw Error("assemble_gain: dimension mismatch");
  }
  MatrixXd k(n, 4 * n);
  k.leftCols(2 * n) = m0.bottomRows(n);
  k.rightCols(2 * n) = m0.topRows(n);
  k += lm.I_tilde * m1;
  return k;
}

MatrixXd M1Derivative(const LiftedMatrices& lm, double t, const MatrixXd& m0,
                      const MatrixXd& m1) {
  const VectorXd a = lm.ADiag(t);
  VectorXd abar(4 * lm.n);
  abar << a, a, a, a;
  const MatrixXd k = AssembleGain(m0, m1, lm);
  MatrixXd r = k.transpose() * k;
  r -= abar.asDiagonal() * m1;
  r -= m1 * abar.asDiagonal();
  return r;
}

VectorXd M2Derivative(const LiftedMatrices& lm, double t, const MatrixXd& m0,
                      const MatrixXd& m1, const VectorXd& m2) {
  const VectorXd a = lm.ADiag(t);
  VectorXd abar(4 * lm.n);
  abar << a, a, a, a;
  const MatrixXd k = AssembleGain(m0, m1, lm);
  return k.transpose() * (lm.I_tilde * m2) - abar.cwiseProduct(m2);
}

double M3Source(const LiftedMatrices& lm, double t, const MatrixXd& m0,
                const MatrixXd& m1, const VectorXd& m2) {
  const int n = lm.n;
  const VectorXd s = lm.SigmaDiag(t);
  // Sigma Sigma^T is diag(s^2, 0) in 2N dimensions, so only the upper-left
  // N x N block of M0 + J^T M1 J enters, with J = [I; I/2].
  const int m = 2 * n;
  MatrixXd jm = m0;
  jm += m1.topLeftCorner(m, m) + 0.5 * m1.topRightCorner(m, m) +
        0.5 * m1.bottomLeftCorner(m, m) + 0.25 * m1.bottomRightCorner(m, m);
  double tr = 0.0;
  for (int i = 0; i < n; ++i) tr += s(i) * s(i) * jm(i, i);
  return tr - (lm.I_tilde * m2).squaredNorm();
}

std::vector<MatrixXd> SolveM0(const LiftedMatrices& lm, const TimeGrid& grid) {
  const int m = 2 * lm.n;
  OdeRhs rhs = [&](double t, const VectorXd& y, VectorXd* dy) {
    *dy = Flat(M0Derivative(lm, t, Unflat(y, m)));
  };
  auto path = IntegrateBackward(rhs, Flat(lm.Q_bar), grid,
                                [m](VectorXd* y) { SymmetrizeFlat(y, m); });
  std::vector<MatrixXd> out;
  out.reserve(path.size());
  for (const auto& v : path) out.push_back(Unflat(v, m));
  return out;
}

std::vector<MatrixXd> SolveM1(const LiftedMatrices& lm,
                              const std::vector<MatrixXd>& m0,
                              const TimeGrid& grid) {
  CheckGrid(grid, m0.size());
  const int m = 4 * lm.n;
  std::vector<VectorXd> y0, d0;
  for (int k = 0; k < grid.n_knots(); ++k) {
    y0.push_back(Flat(m0[k]));
    d0.push_back(Flat(M0Derivative(lm, grid.t(k), m0[k])));
  }
  HermitePath m0_at(grid, std::move(y0), std::move(d0));
  const int m0_rows = 2 * lm.n;
  OdeRhs rhs = [&](double t, const VectorXd& y, VectorXd* dy) {
    *dy = Flat(M1Derivative(lm, t, Unflat(m0_at(t), m0_rows), Unflat(y, m)));
  };
  std::vector<VectorXd> path;
  try {
    path = IntegrateBackward(rhs, VectorXd::Zero(m * m), grid,
                             [m](VectorXd* y) { SymmetrizeFlat(y, m); });
  } catch (const BlowUpError& e) {
    std::ostringstream msg;
    msg << "Riccati solution does not exist on [0,T] at this horizon: "
        << e.what();
    throw BlowUpError(msg.str(), e.knot(), e.time());
  }
  std::vector<MatrixXd> out;
  for (const auto& v : path) out.push_back(Unflat(v, m));
  return out;
}

std::vector<VectorXd> SolveM2(const LiftedMatrices& lm,
                              const std::vector<MatrixXd>& m0,
                              const std::vector<MatrixXd>& m1,
                              const TimeGrid& grid) {
  CheckGrid(grid, m0.size());
  CheckGrid(grid, m1.size());
  const int r0 = 2 * lm.n, r1 = 4 * lm.n;
  std::vector<VectorXd> y0, d0, y1, d1;
  for (int k = 0; k < grid.n_knots(); ++k) {
    y0.push_back(Flat(m0[k]));
    d0.push_back(Flat(M0Derivative(lm, grid.t(k), m0[k])));
    y1.push_back(Flat(m1[k]));
    d1.push_back(Flat(M1Derivative(lm, grid.t(k), m0[k], m1[k])));
  }
  HermitePath m0_at(grid, std::move(y0), std::move(d0));
  HermitePath m1_at(grid, std::move(y1), std::move(d1));
  OdeRhs rhs = [&](double t, const VectorXd& y, VectorXd* dy) {
    *dy = M2Derivative(lm, t, Unflat(m0_at(t), r0), Unflat(m1_at(t), r1), y);
  };
  VectorXd terminal = VectorXd::Zero(r1);
  terminal.head(r0) = lm.p_vec;
  return IntegrateBackward(rhs, terminal, grid);
}

std::vector<double> SolveM3(const LiftedMatrices& lm,
                            const std::vector<MatrixXd>& m0,
                            const std::vector<MatrixXd>& m1,
                            const std::vector<VectorXd>& m2,
                            const TimeGrid& grid) {
  CheckGrid(grid, m0.size());
  CheckGrid(grid, m1.size());
  CheckGrid(grid, m2.size());
  const int n = grid.n_steps();
  std::vector<double> g(n + 1);
  for (int k = 0; k <= n; ++k) g[k] = M3Source(lm, grid.t(k), m0[k], m1[k], m2[k]);
  std::vector<double> m3(n + 1, 0.0);
  if (!grid.uniform()) {
    for (int k = n - 1; k >= 0; --k) {
      m3[k] = m3[k + 1] + 0.5 * grid.dt(k) * (g[k] + g[k + 1]);
    }
    return m3;
  }
  const double h = grid.dt(0);
  // Simpson over interval pairs counted from T; odd offsets get the
  // three-point single-interval rule.
  for (int k = n - 1; k >= 0; --k) {
    if ((n - k) % 2 == 0) {
      m3[k] = m3[k + 2] + h / 3.0 * (g[k] + 4.0 * g[k + 1] + g[k + 2]);
    } else if (k + 2 <= n) {
      m3[k] = m3[k + 1] + h / 12.0 * (5.0 * g[k] + 8.0 * g[k + 1] - g[k + 2]);
    } else {
      m3[k] = m3[k + 1] + h / 12.0 * (-g[k - 1] + 8.0 * g[k] + 5.0 * g[k + 1]);
    }
  }
  return m3;
}

namespace {

template <typename Path, typename Deriv>
void Residual(const TimeGrid& grid, const Path& path, Deriv deriv,
              double* res, double* scale) {
  *res = 0.0;
  *scale = 0.0;
  for (int k = 0; k < grid.n_knots(); ++k) {
    *scale = std::max(*scale, static_cast<double>(Eigen::MatrixXd(path[k]).norm()));
  }
  for (int k = 1; k < grid.n_steps(); ++k) {
    const double dt = grid.t(k + 1) - grid.t(k - 1);
    const auto fd = (path[k + 1] - path[k - 1]) / dt;
    *res = std::max(*res, static_cast<double>((fd - deriv(k)).norm()));
  }
}

}  // namespace

RiccatiSolution SolveRiccati(const LiftedMatrices& lm, const TimeGrid& grid) {
  RiccatiSolution s;
  s.grid = grid;
  s.m0 = SolveM0(lm, grid);
  s.m1 = SolveM1(lm, s.m0, grid);
  s.m2 = SolveM2(lm, s.m0, s.m1, grid);
  s.m3 = SolveM3(lm, s.m0, s.m1, s.m2, grid);
  for (int k = 0; k < grid.n_knots(); ++k) {
    s.k_gain.push_back(AssembleGain(s.m0[k], s.m1[k], lm));
  }
  ResidualReport& r = s.residual;
  Residual(grid, s.m0, [&](int k) { return M0Derivative(lm, grid.t(k), s.m0[k]); },
           &r.m0, &r.m0_scale);
  Residual(grid, s.m1,
           [&](int k) { return M1Derivative(lm, grid.t(k), s.m0[k], s.m1[k]); },
           &r.m1, &r.m1_scale);
  Residual(grid, s.m2,
           [&](int k) {
             return M2Derivative(lm, grid.t(k), s.m0[k], s.m1[k], s.m2[k]);
           },
           &r.m2, &r.m2_scale);
  r.m3 = 0.0;
  r.m3_scale = 0.0;
  for (int k = 0; k < grid.n_knots(); ++k) r.m3_scale = std::max(r.m3_scale, std::abs(s.m3[k]));
  for (int k = 1; k < grid.n_steps(); ++k) {
    const double fd = (s.m3[k + 1] - s.m3[k - 1]) / (grid.t(k + 1) - grid.t(k - 1));
    const double rhs = -M3Source(lm, grid.t(k), s.m0[k], s.m1[k], s.m2[k]);
    r.m3 = std::max(r.m3, std::abs(fd - rhs));
  }
  return s;
}

RiccatiSolution SolveRiccati(const LqGameSpec& spec, const TimeGrid& grid) {
  return SolveRiccati(BuildLiftedMatrices(spec), grid);
}

double OptimalPotentialValue(const RiccatiSolution& sol, const LqGameSpec& spec) {
  const int n = spec.n_players;
  VectorXd x0 = VectorXd::Zero(2 * n);
  x0.head(n) = spec.x0;
  VectorXd mbar(4 * n);
  mbar << x0, 0.5 * x0;
  return x0.dot(sol.m0[0] * x0) + mbar.dot(sol.m1[0] * mbar) +
         2.0 * sol.m2[0].dot(mbar) + sol.m3[0];
}

ColumnTable ToColumnTable(const RiccatiSolution& sol) {
  ColumnTable t;
  const int nk = sol.grid.n_knots();
  t.Add("t", sol.grid.knots());
  auto add_matrix = [&](const std::string& name, const std::vector<MatrixXd>& p) {
    for (int r = 0; r < p[0].rows(); ++r) {
      for (int c = 0; c < p[0].cols(); ++c) {
        std::vector<double> col(nk);
        for (int k = 0; k < nk; ++k) col[k] = p[k](r, c);
        t.Add(name + "_" + std::to_string(r) + "_" + std::to_string(c), std::move(col));
      }
    }
  };
  add_matrix("m0", sol.m0);
  add_matrix("m1", sol.m1);
  for (int r = 0; r < sol.m2[0].size(); ++r) {
    std::vector<double> col(nk);
    for (int k = 0; k < nk; ++k) col[k] = sol.m2[k](r);
    t.Add("m2_" + std::to_string(r), std::move(col));
  }
  t.Add("m3", sol.m3);
  add_matrix("k", sol.k_gain);
  return t;
}

ColumnTable ToPlotTable(const RiccatiSolution& sol) {
  ColumnTable t;
  const int nk = sol.grid.n_knots();
  const int n = static_cast<int>(sol.k_gain[0].rows());
  t.Add("t", sol.grid.knots());
  std::vector<double> m0_tr(nk), m0_x(nk), m1_tr(nk), m2_norm(nk), k_norm(nk);
  for (int k = 0; k < nk; ++k) {
    m0_tr[k] = sol.m0[k].trace();
    m0_x[k] = sol.m0[k](0, n);
    m1_tr[k] = sol.m1[k].trace();
    m2_norm[k] = sol.m2[k].norm();
    k_norm[k] = sol.k_gain[k].norm();
  }
  t.Add("m0_trace", m0_tr);
  t.Add("m0_0_n", m0_x);
  t.Add("m1_trace", m1_tr);
  t.Add("m2_norm", m2_norm);
  t.Add("m3", sol.m3);
  t.Add("k_norm", k_norm);
  return t;
}

}  // namespace apgame
