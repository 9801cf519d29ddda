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

#include "apgame/sde_sim.h"

#include <cmath>
#include <sstream>

#include "apgame/errors.h"
#include "apgame/parallel.h"

namespace apgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---- NoiseBatch ----

NoiseBatch NoiseBatch::Make(uint64_t seed, int n_paths, const TimeGrid& grid,
                            int n_dims, RSpec r, NoiseOptions opts) {
  if (n_paths < 1) throw ConfigError("n_paths must be >= 1", "paths");
  if (n_dims < 1) throw ConfigError("n_dims must be >= 1", "n_dims");
  NoiseBatch b;
  b.seed_ = seed;
  b.n_paths_ = n_paths;
  b.grid_ = grid;
  b.n_dims_ = n_dims;
  b.r_ = r;
  b.opts_ = opts;
  if (r.mode == RMode::kQuadrature) b.rule_ = GaussLegendre01(r.nodes);
  return b;
}

MatrixXd NoiseBatch::Increments(int path) const {
  const int steps = grid_.n_steps();
  MatrixXd dw(n_dims_, steps);
  uint32_t p = static_cast<uint32_t>(path);
  double sign = 1.0;
  if (opts_.shared_brownian) {
    p = 0;
  } else if (opts_.antithetic) {
    if (path % 2 == 1) sign = -1.0;
    p = static_cast<uint32_t>(path - path % 2);
  }
  const Philox4x32 gen(seed_);
  for (int k = 0; k < steps; ++k) {
    if (zero_from_ >= 0 && k >= zero_from_) {
      dw.col(k).setZero();
      continue;
    }
    const double s = sign * std::sqrt(grid_.dt(k));
    for (int d = 0; d < n_dims_; d += 2) {
      const auto z = gen.Normals({p, static_cast<uint32_t>(k),
                                  static_cast<uint32_t>(d / 2), kStreamBrownian});
      dw(d, k) = s * z[0];
      if (d + 1 < n_dims_) dw(d + 1, k) = s * z[1];
    }
  }
  return dw;
}

double NoiseBatch::R(int path) const {
  if (r_.mode != RMode::kSampled) {
    throw Error("noise batch does not carry sampled r");
  }
  uint32_t p = static_cast<uint32_t>(path);
  if (opts_.antithetic) p = static_cast<uint32_t>(path - path % 2);
  const Philox4x32 gen(seed_);
  return gen.Uniforms({p, 0, 0, kStreamUniformR})[0];
}

NoiseBatch NoiseBatch::ZeroedFrom(int step) const {
  NoiseBatch b = *this;
  b.zero_from_ = step;
  return b;
}

// ---- FeedbackLaw ----

std::shared_ptr<const FeedbackLaw> FeedbackLaw::FromRiccati(
    const LqGameSpec& spec, const RiccatiSolution& sol, const TimeGrid& target) {
  const LiftedMatrices lm = BuildLiftedMatrices(spec);
  const int n = spec.n_players;
  if (std::abs(sol.grid.horizon() - target.horizon()) >
      1e-12 * std::max(1.0, target.horizon())) {
    throw Error("feedback grid mismatch: horizons differ");
  }
  auto law = std::make_shared<FeedbackLaw>();
  law->n_ = n;
  law->grid_ = target;
  law->i_tilde_ = lm.I_tilde;
  VectorXd x0 = VectorXd::Zero(2 * n);
  x0.head(n) = spec.x0;
  law->f0_.resize(4 * n);
  law->f0_ << x0, 0.5 * x0;
  const bool same = sol.grid == target;
  for (int k = 0; k < target.n_knots(); ++k) {
    const double t = target.t(k);
    if (same) {
      law->gain_.push_back(sol.k_gain[k]);
      law->offset_.push_back(lm.I_tilde * sol.m2[k]);
    } else {
      const int j = sol.grid.Locate(t);
      const double w = (t - sol.grid.t(j)) / sol.grid.dt(j);
      law->gain_.push_back((1 - w) * sol.k_gain[j] + w * sol.k_gain[j + 1]);
      law->offset_.push_back(lm.I_tilde * ((1 - w) * sol.m2[j] + w * sol.m2[j + 1]));
    }
    law->a_.push_back(lm.ADiag(t));
    law->sigma_.push_back(lm.SigmaDiag(t));
  }
  return law;
}

void FeedbackLaw::Run(const MatrixXd& dw, MatrixXd* f, MatrixXd* u) const {
  const int steps = grid_.n_steps();
  const int n = n_;
  f->resize(4 * n, steps + 1);
  u->resize(n, steps);
  f->col(0) = f0_;
  VectorXd abar(4 * n);
  for (int k = 0; k < steps; ++k) {
    const double dt = grid_.dt(k);
    const VectorXd fk = f->col(k);
    const VectorXd uk = -gain_[k] * fk - offset_[k];
    u->col(k) = uk;
    const VectorXd& a = a_[k];
    abar << a, a, a, a;
    VectorXd next = fk + dt * (abar.cwiseProduct(fk) + i_tilde_.transpose() * uk);
    const VectorXd sdw = sigma_[k].cwiseProduct(dw.col(k));
    next.segment(0, n) += sdw;
    next.segment(2 * n, n) += 0.5 * sdw;
    f->col(k + 1) = next;
  }
}

// ---- StrategyProfile ----

StrategyProfile StrategyProfile::Deterministic(const TimeGrid& grid, MatrixXd u) {
  if (u.cols() != grid.n_steps()) {
    throw Error("deterministic control must have n_steps columns");
  }
  StrategyProfile p;
  p.n_ = static_cast<int>(u.rows());
  p.grid_ = grid;
  p.base_ = std::move(u);
  return p;
}

StrategyProfile StrategyProfile::Feedback(std::shared_ptr<const FeedbackLaw> law) {
  StrategyProfile p;
  p.n_ = law->n_players();
  p.grid_ = law->grid();
  p.law_ = std::move(law);
  return p;
}

StrategyProfile StrategyProfile::Scaled(int player, double lambda) const {
  StrategyProfile p = *this;
  p.mods_.push_back({Mod::kScale, player, lambda, VectorXd()});
  return p;
}

StrategyProfile StrategyProfile::Shifted(int player, const VectorXd& direction,
                                         double eps) const {
  if (direction.size() != grid_.n_steps()) {
    throw Error("direction must have n_steps entries");
  }
  StrategyProfile p = *this;
  p.mods_.push_back({Mod::kShift, player, eps, direction});
  return p;
}

StrategyProfile StrategyProfile::GainTilted(int player, const VectorXd& delta) const {
  if (!law_) throw Error("gain tilt needs a feedback base profile");
  if (delta.size() != 4 * n_) throw Error("gain tilt needs a 4N vector");
  StrategyProfile p = *this;
  p.mods_.push_back({Mod::kTilt, player, 0.0, delta});
  return p;
}

std::vector<int> StrategyProfile::ModifiedPlayers() const {
  std::vector<int> out;
  for (const auto& m : mods_) {
    if (std::find(out.begin(), out.end(), m.player) == out.end()) out.push_back(m.player);
  }
  return out;
}

std::string StrategyProfile::Describe() const {
  std::ostringstream s;
  s << (law_ ? "feedback" : "deterministic");
  for (const auto& m : mods_) {
    switch (m.kind) {
      case Mod::kScale:
        s << "+scale(p" << m.player + 1 << "," << m.scalar << ")";
        break;
      case Mod::kShift:
        s << "+shift(p" << m.player + 1 << "," << m.scalar << ")";
        break;
      case Mod::kTilt:
        s << "+tilt(p" << m.player + 1 << ",|d|=" << m.vec.norm() << ")";
        break;
    }
  }
  return s.str();
}

MatrixXd StrategyProfile::Realize(const MatrixXd& dw, MatrixXd* f_state) const {
  MatrixXd u, f;
  if (law_) {
    law_->Run(dw, &f, &u);
  } else {
    u = base_;
  }
  for (const auto& m : mods_) {
    switch (m.kind) {
      case Mod::kScale:
        u.row(m.player) *= m.scalar;
        break;
      case Mod::kShift:
        u.row(m.player) += m.scalar * m.vec.transpose();
        break;
      case Mod::kTilt:
        for (int k = 0; k < u.cols(); ++k) u(m.player, k) -= m.vec.dot(f.col(k));
        break;
    }
  }
  if (f_state) *f_state = std::move(f);
  return u;
}

void CheckCompatible(int n_players, const StrategyProfile& profile,
                     const NoiseBatch& noise) {
  if (!(profile.grid() == noise.grid())) {
    throw Error("profile grid differs from noise grid");
  }
  if (profile.n_players() != n_players) {
    throw Error("profile player count differs from the game");
  }
  if (noise.n_dims() != n_players) {
    throw Error("noise dimension differs from the player count");
  }
}

// ---- Kernels ----

namespace {

[[noreturn]] void NonFinite(const char* what, int step) {
  std::ostringstream s;
  s << what << " became non-finite at step " << step;
  throw NumericalError(s.str());
}

}  // namespace

MatrixXd EulerState(const GeneralGameSpec& spec, const TimeGrid& grid,
                    const MatrixXd& u, const MatrixXd& dw) {
  const int n = spec.n_players, steps = grid.n_steps();
  MatrixXd x(n, steps + 1);
  x.col(0) = spec.x0;
  VectorXd xk(n);
  for (int k = 0; k < steps; ++k) {
    const double t = grid.t(k), dt = grid.dt(k);
    xk = x.col(k);
    for (int i = 0; i < n; ++i) {
      x(i, k + 1) = xk(i) + dt * (spec.drift->Value(i, t, xk(i), xk) + u(i, k)) +
                    spec.sigma_fn[i](t) * dw(i, k);
    }
    if (!x.col(k + 1).allFinite()) NonFinite("state", k + 1);
  }
  return x;
}

MatrixXd EulerSensitivity(const GeneralGameSpec& spec, const TimeGrid& grid,
                          const MatrixXd& x, int h, const VectorXd& dir) {
  const int n = spec.n_players, steps = grid.n_steps();
  const bool coupled = !spec.drift->Decoupled();
  MatrixXd y = MatrixXd::Zero(n, steps + 1);
  VectorXd xk(n), yk(n), next(n);
  for (int k = 0; k < steps; ++k) {
    const double t = grid.t(k), dt = grid.dt(k);
    xk = x.col(k);
    yk = y.col(k);
    for (int i = 0; i < n; ++i) {
      double drift = spec.drift->Dx(i, t, xk(i), xk) * yk(i);
      if (coupled) drift += spec.drift->Dy(i, t, xk(i), xk).dot(yk);
      if (i == h) drift += dir(k);
      next(i) = yk(i) + dt * drift;
    }
    y.col(k + 1) = next;
    if (!next.allFinite()) NonFinite("sensitivity", k + 1);
  }
  return y;
}

MatrixXd EulerSecondSensitivity(const GeneralGameSpec& spec,
                                const TimeGrid& grid, const MatrixXd& x,
                                const MatrixXd& yh, const MatrixXd& yl) {
  const int n = spec.n_players, steps = grid.n_steps();
  MatrixXd z = MatrixXd::Zero(n, steps + 1);
  const bool coupled = !spec.drift->Decoupled();
  const bool linear = spec.drift->Linear();
  if (!coupled && linear) return z;
  VectorXd xk(n), zk(n), a(n), b(n), next(n);
  for (int k = 0; k < steps; ++k) {
    const double t = grid.t(k), dt = grid.dt(k);
    xk = x.col(k);
    zk = z.col(k);
    a = yh.col(k);
    b = yl.col(k);
    for (int i = 0; i < n; ++i) {
      const double xi = xk(i);
      double drift = spec.drift->Dx(i, t, xi, xk) * zk(i);
      double src = 0.0;
      if (!linear) src += a(i) * spec.drift->Dxx(i, t, xi, xk) * b(i);
      if (coupled) {
        drift += spec.drift->Dy(i, t, xi, xk).dot(zk);
        const VectorXd dxy = spec.drift->Dxy(i, t, xi, xk);
        src += a(i) * dxy.dot(b) + dxy.dot(a) * b(i);
        src += a.dot(spec.drift->Dyy(i, t, xi, xk) * b);
      }
      next(i) = zk(i) + dt * (drift + src);
    }
    z.col(k + 1) = next;
    if (!next.allFinite()) NonFinite("second-order sensitivity", k + 1);
  }
  return z;
}

MatrixXd EulerLifted(const LiftedMatrices& lm, const TimeGrid& grid,
                     const VectorXd& x0, const MatrixXd& u, const MatrixXd& dw,
                     double r) {
  const int n = lm.n, steps = grid.n_steps();
  MatrixXd out(2 * n, steps + 1);
  out.col(0).head(n) = x0;
  out.col(0).tail(n).setZero();
  for (int k = 0; k < steps; ++k) {
    const double t = grid.t(k), dt = grid.dt(k);
    for (int i = 0; i < n; ++i) {
      const double a = lm.a_fn[i](t);
      const double xs = out(i, k), ys = out(n + i, k);
      out(i, k + 1) = xs + dt * (a * xs + r * u(i, k)) + lm.sigma_fn[i](t) * dw(i, k);
      out(n + i, k + 1) = ys + dt * (a * ys + u(i, k));
    }
  }
  if (!out.allFinite()) NonFinite("lifted state", steps);
  return out;
}

// ---- Batch simulation ----

namespace {

template <typename F>
void ForPaths(const NoiseBatch& noise, F&& f) {
  ParallelFor(noise.n_paths(), [&](int p) {
    try {
      f(p);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " on path " + std::to_string(p));
    }
  });
}

PathBundle EmptyBundle(const NoiseBatch& noise) {
  PathBundle b;
  b.grid = noise.grid();
  b.seed = noise.seed();
  return b;
}

}  // namespace

PathBundle SimulateState(const GeneralGameSpec& spec,
                         const StrategyProfile& profile,
                         const NoiseBatch& noise) {
  CheckCompatible(spec.n_players, profile, noise);
  PathBundle b = EmptyBundle(noise);
  const int m = noise.n_paths();
  b.x.resize(m);
  b.u.resize(m);
  const bool keep_f = profile.HasFeedback();
  if (keep_f) b.f_state.resize(m);
  ForPaths(noise, [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    MatrixXd f;
    b.u[p] = profile.Realize(dw, keep_f ? &f : nullptr);
    b.x[p] = EulerState(spec, noise.grid(), b.u[p], dw);
    if (keep_f) b.f_state[p] = std::move(f);
  });
  return b;
}

PathBundle SimulateState(const LqGameSpec& spec, const StrategyProfile& profile,
                         const NoiseBatch& noise) {
  return SimulateState(ToGeneral(spec), profile, noise);
}

PathBundle SimulateSensitivityY(const GeneralGameSpec& spec,
                                const StrategyProfile& profile, int h,
                                const VectorXd& direction,
                                const NoiseBatch& noise) {
  if (direction.size() != noise.grid().n_steps()) {
    throw Error("direction must have n_steps entries");
  }
  PathBundle b = SimulateState(spec, profile, noise);
  b.y.resize(noise.n_paths());
  ForPaths(noise, [&](int p) {
    b.y[p] = EulerSensitivity(spec, noise.grid(), b.x[p], h, direction);
  });
  return b;
}

PathBundle SimulateSensitivityZ(const GeneralGameSpec& spec,
                                const StrategyProfile& profile, int h, int l,
                                const VectorXd& dir_h, const VectorXd& dir_l,
                                const NoiseBatch& noise) {
  if (h == l) throw Error("second-order sensitivity needs distinct players");
  PathBundle b = SimulateState(spec, profile, noise);
  const int m = noise.n_paths();
  b.y.resize(m);
  b.y_other.resize(m);
  b.z.resize(m);
  ForPaths(noise, [&](int p) {
    b.y[p] = EulerSensitivity(spec, noise.grid(), b.x[p], h, dir_h);
    b.y_other[p] = EulerSensitivity(spec, noise.grid(), b.x[p], l, dir_l);
    b.z[p] = EulerSecondSensitivity(spec, noise.grid(), b.x[p], b.y[p], b.y_other[p]);
  });
  return b;
}

PathBundle SimulateLifted(const LqGameSpec& spec, const StrategyProfile& profile,
                          const NoiseBatch& noise) {
  CheckCompatible(spec.n_players, profile, noise);
  if (noise.r_mode() == RMode::kNone) {
    throw Error("lifted simulation needs a noise batch carrying r");
  }
  const LiftedMatrices lm = BuildLiftedMatrices(spec);
  PathBundle b = EmptyBundle(noise);
  const int m = noise.n_paths();
  b.lifted.resize(m);
  b.u.resize(m);
  b.r.resize(m);
  ForPaths(noise, [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    b.u[p] = profile.Realize(dw);
    const auto& rule = noise.RRule();
    b.r[p] = noise.r_mode() == RMode::kSampled
                 ? noise.R(p)
                 : rule.nodes[p % rule.nodes.size()];
    b.lifted[p] = EulerLifted(lm, noise.grid(), spec.x0, b.u[p], dw, b.r[p]);
  });
  return b;
}

PathBundle SimulateFProcess(const LqGameSpec& spec, const RiccatiSolution& sol,
                            const NoiseBatch& noise) {
  const auto law = FeedbackLaw::FromRiccati(spec, sol, noise.grid());
  return SimulateState(spec, StrategyProfile::Feedback(law), noise);
}

ColumnTable PathBundle::ToColumnTable(int max_paths, int stride) const {
  ColumnTable t;
  stride = std::max(1, stride);
  std::vector<int> knots;
  for (int k = 0; k < grid.n_knots(); k += stride) knots.push_back(k);
  if (knots.back() != grid.n_steps()) knots.push_back(grid.n_steps());
  std::vector<double> tt;
  for (int k : knots) tt.push_back(grid.t(k));
  t.Add("t", tt);
  auto add = [&](const char* name, const std::vector<MatrixXd>& field) {
    const int m = std::min<int>(max_paths, static_cast<int>(field.size()));
    for (int p = 0; p < m; ++p) {
      for (int r = 0; r < field[p].rows(); ++r) {
        std::vector<double> col;
        for (int k : knots) {
          // Controls live on steps; the final knot repeats the last step.
          col.push_back(field[p](r, std::min<int>(k, static_cast<int>(field[p].cols()) - 1)));
        }
        t.Add(std::string(name) + "_p" + std::to_string(p) + "_" + std::to_string(r),
              std::move(col));
      }
    }
  };
  add("x", x);
  add("u", u);
  add("y", y);
  add("z", z);
  add("f", f_state);
  add("lifted", lifted);
  t.meta["seed"] = seed;
  t.meta["grid"] = {{"horizon", grid.horizon()}, {"n_steps", grid.n_steps()}};
  return t;
}

}  // namespace apgame
