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

#include "apgame/alpha_bounds.h"

#include <algorithm>
#include <cmath>

#include <boost/random/sobol.hpp>

#include "apgame/errors.h"
#include "apgame/time_grid.h"

namespace apgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

CostDerivBounds CostDerivBounds::Zero(int n) {
  CostDerivBounds b;
  b.d2f_xx = MatrixXd::Zero(n, n);
  b.d2f_xu = MatrixXd::Zero(n, n);
  b.d1f_x0 = VectorXd::Zero(n);
  b.d2g_xx = MatrixXd::Zero(n, n);
  b.d1g_x0 = VectorXd::Zero(n);
  return b;
}

json AlphaBoundBreakdown::ToJson() const {
  return json{{"n_players", n_players},
              {"c_v1", c_v1},
              {"c_v2", c_v2},
              {"c_v3", c_v3},
              {"l_b_y", l_b_y},
              {"structural_prefactor", structural_prefactor},
              {"envelope_c", envelope_c},
              {"bound", bound},
              {"argmax_player", argmax_player + 1},
              {"per_player_prefactor", per_player},
              {"norms", estimated ? "estimated sup-norm" : "closed form"}};
}

double AsymmetryIndex(const MatrixXd& q) {
  if (q.rows() != q.cols()) {
    throw ConfigError("asymmetry index needs a square matrix", "q");
  }
  const int n = static_cast<int>(q.rows());
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) s += std::abs(q(j, i) - q(i, j));
    }
    best = std::max(best, s);
  }
  return best;
}

double LqAlphaBound(const LqGameSpec& spec, double envelope_c) {
  if (!(envelope_c >= 0)) {
    throw ConfigError("invariant violation: envelope_c < 0", "envelope_c");
  }
  return envelope_c * AsymmetryIndex(spec.q) / spec.n_players;
}

CvConstants ComputeCvConstants(const CostDerivBounds& b, int i, int j, int n) {
  if (i == j) throw ConfigError("cv constants need i != j", "pair");
  if (b.n() != n || i < 0 || j < 0 || i >= n || j >= n) {
    throw ConfigError("cv constants: bounds not populated over I_N", "bounds");
  }
  CvConstants c;
  // d2 Df / du_i dx_j is stored as d2f_xu[j][i].
  c.c_v1 = b.d2f_xx(i, j) + b.d2f_xu(i, j) + b.d2f_xu(j, i) + b.d2f_uu_ij +
           b.d2g_xx(i, j);

  double v2 = 0.0;
  for (int l = 0; l < n; ++l) {
    if (l != j) v2 += b.d2f_xu(l, i);
  }
  for (int h = 0; h < n; ++h) {
    if (h != i) v2 += b.d2f_xu(h, j);
  }
  for (int h : {i, j}) {
    v2 += b.d1f_x0(h) + b.d1g_x0(h);
    for (int l = 0; l < n; ++l) {
      v2 += b.d2f_xx(h, l) + b.d2f_xu(h, l) + b.d2g_xx(h, l);
    }
  }
  c.c_v2 = v2;

  double v3 = 0.0;
  for (int h = 0; h < n; ++h) {
    if (h == i || h == j) continue;
    v3 += b.d1f_x0(h) + b.d1g_x0(h);
    for (int l = 0; l < n; ++l) {
      if (l == i || l == j) continue;
      v3 += b.d2f_xx(h, l) + b.d2f_xu(h, l) + b.d2g_xx(h, l);
    }
  }
  c.c_v3 = v3;
  return c;
}

AlphaBoundBreakdown TheoremAlphaBound(const PairBoundsTable& table,
                                      const DriftBounds& drift, int n,
                                      double envelope_c) {
  if (!(envelope_c >= 0)) {
    throw ConfigError("invariant violation: envelope_c < 0", "envelope_c");
  }
  if (table.n != n) throw ConfigError("pair table size differs from N", "bounds");
  AlphaBoundBreakdown out;
  out.n_players = n;
  out.l_b_y = drift.l_b_y;
  out.envelope_c = envelope_c;
  out.per_player.assign(n, 0.0);
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    CvConstants sum;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& b = table.Get(i, j);
      if (!b) {
        throw ConfigError("missing pair data for (" + std::to_string(i + 1) +
                              ", " + std::to_string(j + 1) + ")",
                          "bounds");
      }
      out.estimated = out.estimated || b->estimated;
      const CvConstants c = ComputeCvConstants(*b, i, j, n);
      sum.c_v1 += c.c_v1;
      sum.c_v2 += c.c_v2;
      sum.c_v3 += c.c_v3;
    }
    const double pre = sum.c_v1 + drift.l_b_y * (sum.c_v2 / n +
                                                 sum.c_v3 / (static_cast<double>(n) * n));
    out.per_player[i] = pre;
    if (pre > best) {
      best = pre;
      out.argmax_player = i;
      out.c_v1 = sum.c_v1;
      out.c_v2 = sum.c_v2;
      out.c_v3 = sum.c_v3;
    }
  }
  out.structural_prefactor = std::max(best, 0.0);
  out.bound = envelope_c * out.structural_prefactor;
  return out;
}

CostDerivBounds LqCostBounds(const LqGameSpec& spec, int i, int j) {
  const int n = spec.n_players;
  auto hess = [&](int p) {
    MatrixXd h = MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      if (k == p) continue;
      const double c = 2.0 * spec.q(p, k) / n;
      h(p, p) += c;
      h(k, k) += c;
      h(p, k) -= c;
      h(k, p) -= c;
    }
    return h;
  };
  CostDerivBounds b = CostDerivBounds::Zero(n);
  b.d2f_xx = (hess(i) - hess(j)).cwiseAbs();
  b.d2g_xx(i, i) = 2.0 * spec.gamma(i);
  b.d2g_xx(j, j) = 2.0 * spec.gamma(j);
  b.d1g_x0(i) = 2.0 * std::abs(spec.gamma(i) * spec.d(i));
  b.d1g_x0(j) = 2.0 * std::abs(spec.gamma(j) * spec.d(j));
  return b;
}

PairBoundsTable LqPairBounds(const LqGameSpec& spec) {
  const int n = spec.n_players;
  PairBoundsTable t(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) t.Set(i, j, LqCostBounds(spec, i, j));
    }
  }
  return t;
}

PairBoundsTable EstimatePairBounds(const GeneralGameSpec& spec,
                                   const SupNormOptions& opts) {
  Validate(spec);
  const int n = spec.n_players;
  const int dim = 2 * n + 1;
  std::vector<CostDerivBounds> acc(static_cast<size_t>(n) * n,
                                   CostDerivBounds::Zero(n));
  boost::random::sobol gen(dim);
  if (opts.seed > 0) gen.discard(opts.seed * dim);
  const double scale = 1.0 / (static_cast<double>(gen.max()) + 1.0);
  std::vector<MatrixXd> hxx(n), hxu(n), huu(n), hg(n);
  VectorXd x(n), u(n);
  for (int s = 0; s < opts.samples; ++s) {
    for (int a = 0; a < n; ++a) x(a) = opts.box * (2.0 * gen() * scale - 1.0);
    for (int a = 0; a < n; ++a) u(a) = opts.box * (2.0 * gen() * scale - 1.0);
    const double t = spec.horizon * gen() * scale;
    for (int i = 0; i < n; ++i) {
      spec.running->Hessian(i, t, x, u, &hxx[i], &hxu[i], &huu[i]);
      hg[i] = spec.terminal->Hessian(i, x);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        CostDerivBounds& b = acc[i * n + j];
        b.d2f_xx = b.d2f_xx.cwiseMax((hxx[i] - hxx[j]).cwiseAbs());
        b.d2f_xu = b.d2f_xu.cwiseMax((hxu[i] - hxu[j]).cwiseAbs());
        b.d2g_xx = b.d2g_xx.cwiseMax((hg[i] - hg[j]).cwiseAbs());
        b.d2f_uu_ij = std::max(b.d2f_uu_ij, std::abs(huu[i](i, j) - huu[j](i, j)));
      }
    }
  }
  // First derivatives at the origin.
  const TimeGrid grid = opts.time_steps > 0
                            ? TimeGrid::Uniform(spec.horizon, opts.time_steps)
                            : TimeGrid::Default(spec.horizon);
  const VectorXd zero = VectorXd::Zero(n);
  std::vector<MatrixXd> gx0(grid.n_knots(), MatrixXd(n, n));  // [k](i, h)
  for (int k = 0; k < grid.n_knots(); ++k) {
    for (int i = 0; i < n; ++i) {
      VectorXd gx, gu;
      spec.running->Gradient(i, grid.t(k), zero, zero, &gx, &gu);
      gx0[k].row(i) = gx.transpose();
    }
  }
  std::vector<VectorXd> gg0(n);
  for (int i = 0; i < n; ++i) gg0[i] = spec.terminal->Gradient(i, zero);

  PairBoundsTable table(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CostDerivBounds& b = acc[i * n + j];
      b.estimated = true;
      for (int h = 0; h < n; ++h) {
        double s = 0.0;
        for (int k = 0; k < grid.n_steps(); ++k) {
          const double a = gx0[k](i, h) - gx0[k](j, h);
          const double c = gx0[k + 1](i, h) - gx0[k + 1](j, h);
          s += 0.5 * grid.dt(k) * (a * a + c * c);
        }
        b.d1f_x0(h) = std::sqrt(s);
        b.d1g_x0(h) = std::abs(gg0[i](h) - gg0[j](h));
      }
      table.Set(i, j, b);
      table.Set(j, i, b);
    }
  }
  return table;
}

double MomentConstantCp(double p) {
  return std::max(2 * p - 1 + p + p * (p - 1) / 2, p);
}

double MomentBoundX(const DriftBounds& drift, const MomentInputs& in, int i,
                    double p) {
  if (p < 2) throw ConfigError("invariant violation: p < 2", "p");
  const int n = static_cast<int>(in.x0.size());
  const double lb = drift.l_b, ly = drift.l_b_y, T = in.horizon;
  auto term = [&](int k) {
    return std::pow(std::abs(in.x0(k)), p) +
           (p - 1) * std::pow(in.sigma_lp(k), p) + lb * T +
           std::pow(in.u_norm(k), p);
  };
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += term(k);
  return (term(i) + ly / n * sum) *
         std::exp(MomentConstantCp(p) * (lb + ly + 1) * T);
}

double MomentBoundY(const DriftBounds& drift, double horizon, double p, int n,
                    bool is_own, double u_norm) {
  if (p < 2) throw ConfigError("invariant violation: p < 2", "p");
  const double lb = drift.l_b, ly = drift.l_b_y, T = horizon;
  const double cy = std::pow(2 * T, p - 1) * std::exp(p * lb * T);
  const double cbar = std::pow(2 * T, 2 * p - 1) *
                      std::exp(p * (lb + ly) * T) * std::exp(p * lb * T);
  return ((is_own ? cy : 0.0) + std::pow(ly, p) / std::pow(n, p) * cbar) *
         std::pow(u_norm, p);
}

double MomentBoundZShape(const DriftBounds& drift, int n, bool delta_h,
                         bool delta_l, int h, int l, double u_norm_h,
                         double u_norm_l) {
  if (h == l) throw ConfigError("z moment bound needs h != l", "h");
  const double n2 = static_cast<double>(n) * n;
  const double ly = drift.l_b_y;
  return ly * ly * ((int(delta_h) + int(delta_l)) / n2 + 1.0 / (n2 * n2)) *
         u_norm_h * u_norm_h * u_norm_l * u_norm_l;
}

DecayFit RegimeDecayFit(const std::vector<double>& n_values,
                        const std::vector<double>& alpha_values) {
  if (n_values.size() != alpha_values.size()) {
    throw ConfigError("decay fit needs equal-length inputs", "alpha_values");
  }
  DecayFit fit;
  std::vector<double> lx, ly;
  for (size_t k = 0; k < n_values.size(); ++k) {
    if (!(alpha_values[k] > 0) || !(n_values[k] > 0)) {
      fit.dropped.push_back(static_cast<int>(k));
      continue;
    }
    lx.push_back(std::log(n_values[k]));
    ly.push_back(std::log(alpha_values[k]));
  }
  fit.flagged = !fit.dropped.empty();
  fit.used = static_cast<int>(lx.size());
  if (fit.used < 3) {
    fit.flagged = true;
    if (fit.used < 2) return fit;
  }
  const double m = fit.used;
  double sx = 0, sy = 0;
  for (int k = 0; k < fit.used; ++k) {
    sx += lx[k];
    sy += ly[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (int k = 0; k < fit.used; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace apgame
