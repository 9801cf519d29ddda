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

#include <cmath>
#include <cstdint>

#include "apgame/alpha_bounds.h"
#include "apgame/ode_solvers.h"
#include "apgame/quadrature.h"
#include "apgame/rng.h"
#include "apgame/sde_sim.h"
#include "doctest.h"
#include "test_util.h"

using apgame::NoiseBatch;
using apgame::RSpec;
using apgame::StrategyProfile;
using apgame::TimeGrid;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("philox known-answer vectors") {
  using P = apgame::Philox4x32;
  CHECK(P::Apply({0, 0, 0, 0}, {0, 0}) ==
        P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(P::Apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                 {0xffffffffu, 0xffffffffu}) ==
        P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(P::Apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                 {0xa4093822u, 0x299f31d0u}) ==
        P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("gauss-legendre nodes on the unit interval") {
  const auto r2 = apgame::GaussLegendre01(2);
  CHECK(r2.nodes[0] == doctest::Approx((1 - 1 / std::sqrt(3.0)) / 2).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx((1 + 1 / std::sqrt(3.0)) / 2).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  const auto r8 = apgame::GaussLegendre01(8);
  double s = 0.0;
  for (int k = 0; k < 8; ++k) s += r8.weights[k] * std::pow(r8.nodes[k], 15);
  CHECK(s == doctest::Approx(1.0 / 16).epsilon(1e-13));
  const auto r1 = apgame::GaussLegendre01(1);
  CHECK(r1.nodes[0] == 0.5);
}

TEST_CASE("noise batches") {
  const TimeGrid g = TimeGrid::Uniform(1.0, 50);
  const auto a = NoiseBatch::Make(42, 10, g, 3, RSpec::Sampled());
  const auto b = NoiseBatch::Make(42, 10, g, 3, RSpec::Sampled());
  for (int p = 0; p < 10; ++p) {
    CHECK(a.Increments(p) == b.Increments(p));
    CHECK(a.R(p) == b.R(p));
    CHECK(a.R(p) > 0.0);
    CHECK(a.R(p) < 1.0);
  }
  CHECK(NoiseBatch::Make(43, 10, g, 3).Increments(0) != a.Increments(0));

  const int m = 10000;
  const auto big = NoiseBatch::Make(7, m, g, 2);
  MatrixXd sum = MatrixXd::Zero(2, 50);
  for (int p = 0; p < m; ++p) sum += big.Increments(p);
  sum /= m;
  const double dt = 1.0 / 50;
  CHECK(sum.cwiseAbs().maxCoeff() <= 5 * std::sqrt(dt / m));
  // Coordinate mean over all steps and paths.
  CHECK(std::abs(sum.row(0).mean()) <= 5 / std::sqrt(double(m) * 50) * std::sqrt(dt));

  apgame::NoiseOptions anti;
  anti.antithetic = true;
  const auto at = NoiseBatch::Make(5, 4, g, 2, RSpec::None(), anti);
  CHECK(at.Increments(1) == -at.Increments(0));
  CHECK(at.Increments(3) == -at.Increments(2));

  const auto q = NoiseBatch::Make(5, 4, g, 2, RSpec::Quadrature(2));
  CHECK(q.RRule().nodes.size() == 2);
}

TEST_CASE("state simulation") {
  const TimeGrid g = TimeGrid::Uniform(1.0, 100);
  const auto frozen = apgame::testing::SimpleSpec(2, 1.0, 0.0, 1.0, 0.0, 0.7);
  const auto noise = NoiseBatch::Make(1, 3, g, 2);
  const auto zero = StrategyProfile::Deterministic(g, MatrixXd::Zero(2, 100));
  auto b = apgame::SimulateState(frozen, zero, noise);
  for (const auto& x : b.x) CHECK(x == MatrixXd::Constant(2, 101, 0.7));

  const auto one = apgame::testing::SimpleSpec(1, 1.0, 0.0, 1.0, 0.0, 0.25);
  const auto n1 = NoiseBatch::Make(1, 1, g, 1);
  b = apgame::SimulateState(one, StrategyProfile::Deterministic(g, MatrixXd::Ones(1, 100)), n1);
  CHECK(b.x[0](0, 100) == doctest::Approx(1.25).epsilon(1e-14));

  auto lin = apgame::testing::SimpleSpec(1, 1.0, 0.5, 1.0, 0.0, 1.0);
  lin.a_fn[0] = apgame::Coefficient::Constant(0.4);
  const int m = 10000;
  const auto big = NoiseBatch::Make(3, m, g, 1);
  b = apgame::SimulateState(lin, StrategyProfile::Deterministic(g, MatrixXd::Zero(1, 100)), big);
  std::vector<double> xt(m);
  for (int p = 0; p < m; ++p) xt[p] = b.x[p](0, 100);
  double mean = 0.0, var = 0.0;
  for (double v : xt) mean += v;
  mean /= m;
  for (double v : xt) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (m - 1) / m);
  const double exact = std::exp(0.4);
  // Euler mean is (1 + a dt)^n exactly.
  const double bias = std::abs(std::pow(1 + 0.4 / 100, 100) - exact);
  CHECK(std::abs(mean - exact) <= 3 * se + 1.5 * bias);
}

TEST_CASE("strong euler order with additive noise") {
  auto s = apgame::testing::SimpleSpec(1, 1.0, 0.8, 1.0, 0.0, 1.0);
  s.a_fn[0] = apgame::Coefficient::Constant(-0.9);
  const auto general = apgame::ToGeneral(s);
  const int fine_steps = 2048, m = 400;
  const TimeGrid fine = TimeGrid::Uniform(1.0, fine_steps);
  const auto noise = NoiseBatch::Make(21, m, fine, 1);
  std::vector<double> err(4, 0.0);
  const std::vector<int> coarse_steps = {16, 32, 64, 128};
  for (int p = 0; p < m; ++p) {
    const MatrixXd dwf = noise.Increments(p);
    const MatrixXd ref = apgame::EulerState(general, fine, MatrixXd::Constant(1, fine_steps, 0.3), dwf);
    for (size_t c = 0; c < coarse_steps.size(); ++c) {
      const int n = coarse_steps[c], r = fine_steps / n;
      MatrixXd dw = MatrixXd::Zero(1, n);
      for (int k = 0; k < n; ++k) dw(0, k) = dwf.block(0, k * r, 1, r).sum();
      const MatrixXd x = apgame::EulerState(general, TimeGrid::Uniform(1.0, n),
                                            MatrixXd::Constant(1, n, 0.3), dw);
      err[c] += std::abs(x(0, n) - ref(0, fine_steps)) / m;
    }
  }
  for (size_t c = 0; c + 1 < err.size(); ++c) {
    const double order = std::log2(err[c] / err[c + 1]);
    CHECK(order >= 0.8);
    CHECK(order <= 1.2);
  }
}

TEST_CASE("first-order sensitivity") {
  const TimeGrid g = TimeGrid::Uniform(1.0, 400);
  auto s = apgame::testing::SimpleSpec(3, 1.0, 0.3, 1.0, 0.0, 0.0);
  const auto noise = NoiseBatch::Make(2, 2, g, 3);
  const auto zero = StrategyProfile::Deterministic(g, MatrixXd::Zero(3, 400));
  const VectorXd ones = VectorXd::Ones(400);
  auto b = apgame::SimulateSensitivityY(apgame::ToGeneral(s), zero, 1, ones, noise);
  for (int k = 0; k <= 400; ++k) {
    CHECK(b.y[0](1, k) == doctest::Approx(g.t(k)).epsilon(1e-12));
    CHECK(b.y[0](0, k) == 0.0);
    CHECK(b.y[0](2, k) == 0.0);
  }
  const double a = 0.6;
  for (auto& c : s.a_fn) c = apgame::Coefficient::Constant(a);
  b = apgame::SimulateSensitivityY(apgame::ToGeneral(s), zero, 1, ones, noise);
  for (int k : {100, 250, 400}) {
    const double t = g.t(k);
    const double exact = (std::exp(a * t) - 1) / a;
    // First-order Euler bound for y' = a y + 1.
    CHECK(std::abs(b.y[1](1, k) - exact) <= a * t * (1.0 / 400) * std::exp(a * t));
  }

  // Coupled drift, finite-difference oracle on common noise.
  const auto mf = apgame::MakeMeanFieldExample(4, 1.0);
  const auto nm = NoiseBatch::Make(4, 3, g, 4);
  MatrixXd u(4, 400);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 400; ++k) u(i, k) = 0.3 * std::sin(2.0 * g.t(k) + i);
  const auto base = StrategyProfile::Deterministic(g, u);
  VectorXd dir(400);
  for (int k = 0; k < 400; ++k) dir(k) = std::cos(3.0 * g.t(k));
  const double eps = 1e-3;
  const auto yb = apgame::SimulateSensitivityY(mf, base, 2, dir, nm);
  const auto xb = apgame::SimulateState(mf, base.Shifted(2, dir, eps), nm);
  for (int p = 0; p < 3; ++p) {
    const MatrixXd fd = (xb.x[p] - yb.x[p]) / eps;
    CHECK((fd - yb.y[p]).norm() <= 1e-2 * yb.y[p].norm());
  }
}

TEST_CASE("second-order sensitivity") {
  const TimeGrid g = TimeGrid::Uniform(1.0, 400);
  const auto noise = NoiseBatch::Make(9, 2, g, 3);
  VectorXd dh(400), dl(400);
  for (int k = 0; k < 400; ++k) {
    dh(k) = 1.0 + g.t(k);
    dl(k) = std::sin(4.0 * g.t(k));
  }
  const auto lq = apgame::ToGeneral(apgame::testing::RandomLqSpec(3, {.n = 3, .horizon = 1.0, .sigma = 0.3}));
  const auto zero = StrategyProfile::Deterministic(g, MatrixXd::Zero(3, 400));
  const auto zb = apgame::SimulateSensitivityZ(lq, zero, 0, 1, dh, dl, noise);
  for (const auto& z : zb.z) CHECK(z.isZero(0.0));
  CHECK_THROWS(apgame::SimulateSensitivityZ(lq, zero, 1, 1, dh, dl, noise));

  const auto mf = apgame::MakeMeanFieldExample(3, 1.0);
  MatrixXd u(3, 400);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 400; ++k) u(i, k) = 0.4 * std::cos(g.t(k) + i);
  const auto base = StrategyProfile::Deterministic(g, u);
  const auto z = apgame::SimulateSensitivityZ(mf, base, 0, 2, dh, dl, noise);
  const double eps = 1e-3;
  for (int p = 0; p < 2; ++p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd xe = apgame::EulerState(mf, g, base.Shifted(2, dl, eps).Realize(dw), dw);
    const MatrixXd ye = apgame::EulerSensitivity(mf, g, xe, 0, dh);
    const MatrixXd fd = (ye - z.y[p]) / eps;
    CHECK((fd - z.z[p]).norm() <= 2e-2 * z.z[p].norm());
    CHECK(z.z[p].norm() > 0.0);
  }
}

TEST_CASE("second-order sensitivity moments follow the structural factor") {
  // Envelope fitted at N = 4 and reused for N = 8, 16 with a pinned slack
  // of 2; the deviating players also keep their own ratio within [1/2, 2].
  constexpr double kSlack = 2.0;
  double envelope = 0.0;
  std::vector<double> own_ratio(2, 0.0);
  for (int n : {4, 8, 16}) {
    const auto mf = apgame::MakeMeanFieldExample(n, 1.0);
    const TimeGrid g = TimeGrid::Uniform(1.0, 100);
    const int m = 200;
    const auto noise = NoiseBatch::Make(31, m, g, n);
    const auto base = StrategyProfile::Deterministic(g, MatrixXd::Constant(n, 100, 0.2));
    const VectorXd one = VectorXd::Ones(100);
    const auto zb = apgame::SimulateSensitivityZ(mf, base, 0, 1, one, one, noise);
    for (int i = 0; i < n; ++i) {
      double sup = 0.0;
      for (int k = 0; k <= 100; ++k) {
        double s = 0.0;
        for (int p = 0; p < m; ++p) s += zb.z[p](i, k) * zb.z[p](i, k);
        sup = std::max(sup, s / m);
      }
      const double factor = apgame::MomentBoundZShape(mf.drift_bounds, n, i == 0, i == 1, 0, 1, 1.0, 1.0);
      const double ratio = sup / factor;
      if (n == 4) {
        envelope = std::max(envelope, ratio);
        if (i < 2) own_ratio[i] = ratio;
      } else {
        CHECK(sup <= kSlack * envelope * factor);
        if (i < 2) {
          CHECK(ratio <= kSlack * own_ratio[i]);
          CHECK(ratio >= own_ratio[i] / kSlack);
        }
      }
    }
  }
}

TEST_CASE("lifted state blocks") {
  const auto s = apgame::testing::RandomLqSpec(6, {.n = 2, .horizon = 1.0, .sigma = 0.5, .symmetric = false});
  const TimeGrid g = TimeGrid::Uniform(1.0, 100);
  const auto noise = NoiseBatch::Make(8, 4, g, 2, RSpec::Quadrature(4));
  const auto zero = StrategyProfile::Deterministic(g, MatrixXd::Zero(2, 100));
  auto b = apgame::SimulateLifted(s, zero, noise);
  for (const auto& x : b.lifted) CHECK(x.bottomRows(2).isZero(0.0));

  MatrixXd u = MatrixXd::Random(2, 100);
  const auto prof = StrategyProfile::Deterministic(g, u);
  const auto lm = apgame::BuildLiftedMatrices(s);
  const auto state = apgame::SimulateState(s, prof, noise);
  const auto free = apgame::SimulateState(s, zero, noise);
  for (int p = 0; p < 2; ++p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd one = apgame::EulerLifted(lm, g, s.x0, u, dw, 1.0);
    CHECK(one.topRows(2) == state.x[p]);
    const MatrixXd nil = apgame::EulerLifted(lm, g, s.x0, u, dw, 0.0);
    CHECK(nil.topRows(2) == free.x[p]);
  }
}

TEST_CASE("feedback process") {
  const TimeGrid g = TimeGrid::Uniform(0.5, 100);
  auto zero_cost = apgame::testing::SimpleSpec(2, 0.5, 0.4, 0.0, 0.0, 0.3);
  const auto sol0 = apgame::SolveRiccati(zero_cost, g);
  const auto noise = NoiseBatch::Make(2, 3, g, 2);
  const auto b0 = apgame::SimulateFProcess(zero_cost, sol0, noise);
  const auto lm = apgame::BuildLiftedMatrices(zero_cost);
  for (int p = 0; p < 3; ++p) {
    CHECK(b0.u[p].isZero(0.0));
    const MatrixXd free = apgame::EulerLifted(lm, g, zero_cost.x0, MatrixXd::Zero(2, 100),
                                              noise.Increments(p), 1.0);
    CHECK((b0.f_state[p].topRows(4) - free).cwiseAbs().maxCoeff() < 1e-14);
  }

  const auto s = apgame::testing::RandomLqSpec(17, {.n = 2, .sigma = 0.0, .symmetric = false});
  const auto sol = apgame::SolveRiccati(s, g);
  const auto fa = apgame::SimulateFProcess(s, sol, NoiseBatch::Make(1, 1, g, 2));
  const auto fb = apgame::SimulateFProcess(s, sol, NoiseBatch::Make(99, 1, g, 2));
  CHECK(fa.f_state[0] == fb.f_state[0]);

  // Coarser target grid uses interpolated coefficients; differing horizons fail.
  CHECK_NOTHROW(apgame::FeedbackLaw::FromRiccati(s, sol, TimeGrid::Uniform(0.5, 50)));
  CHECK_THROWS(apgame::FeedbackLaw::FromRiccati(s, sol, TimeGrid::Uniform(0.6, 50)));
}

TEST_CASE("common random numbers and causality") {
  const auto s = apgame::testing::RandomLqSpec(18, {.n = 3, .sigma = 0.5, .symmetric = false});
  const TimeGrid g = TimeGrid::Uniform(0.5, 100);
  const auto sol = apgame::SolveRiccati(s, g);
  const auto law = apgame::FeedbackLaw::FromRiccati(s, sol, g);
  const auto base = StrategyProfile::Feedback(law);
  const auto noise = NoiseBatch::Make(12, 4, g, 3);
  const auto a = apgame::SimulateState(s, base, noise);
  const auto b = apgame::SimulateState(s, base.Shifted(1, VectorXd::Ones(100), 0.0), noise);
  for (int p = 0; p < 4; ++p) CHECK(a.x[p] == b.x[p]);

  const auto dev = base.Shifted(1, VectorXd::Ones(100), 0.3);
  CHECK(dev.ModifiedPlayers() == std::vector<int>{1});
  for (int p = 0; p < 4; ++p) {
    const MatrixXd ub = base.Realize(noise.Increments(p));
    const MatrixXd ud = dev.Realize(noise.Increments(p));
    CHECK(ub.row(0) == ud.row(0));
    CHECK(ub.row(2) == ud.row(2));
  }

  for (int k : {0, 37, 99}) {
    const auto cut = noise.ZeroedFrom(k);
    const auto c = apgame::SimulateState(s, base.GainTilted(0, VectorXd::Constant(12, 0.1)), cut);
    const auto full = apgame::SimulateState(s, base.GainTilted(0, VectorXd::Constant(12, 0.1)), noise);
    for (int p = 0; p < 4; ++p) {
      CHECK(c.x[p].leftCols(k + 1) == full.x[p].leftCols(k + 1));
      CHECK(c.u[p].leftCols(k + 1) == full.u[p].leftCols(k + 1));
      CHECK(c.f_state[p].leftCols(k + 1) == full.f_state[p].leftCols(k + 1));
    }
  }
}

TEST_CASE("moment inequalities on a coupled spec") {
  const int n = 3, m = 2000;
  const auto mf = apgame::MakeMeanFieldExample(n, 1.0);
  const TimeGrid g = TimeGrid::Uniform(1.0, 100);
  const auto noise = NoiseBatch::Make(5, m, g, n);
  MatrixXd u(n, 100);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 100; ++k) u(i, k) = 0.5 * std::sin(g.t(k) * (i + 1));
  const auto prof = StrategyProfile::Deterministic(g, u);
  const VectorXd dir = VectorXd::Ones(100);
  const auto yb = apgame::SimulateSensitivityY(mf, prof, 0, dir, noise);
  for (double p : {2.0, 4.0}) {
    apgame::MomentInputs in;
    in.x0 = mf.x0;
    in.horizon = 1.0;
    in.sigma_lp.resize(n);
    in.u_norm.resize(n);
    for (int i = 0; i < n; ++i) {
      in.sigma_lp(i) = mf.sigma_fn[i].LpNorm(p, 1.0);
      double s = 0.0;
      for (int k = 0; k < 100; ++k) s += std::pow(std::abs(u(i, k)), p) * g.dt(k);
      in.u_norm(i) = std::pow(s, 1.0 / p);
    }
    for (int i = 0; i < n; ++i) {
      double sx = 0.0, sy = 0.0;
      for (int k = 0; k <= 100; ++k) {
        double ex = 0.0, ey = 0.0;
        for (int q = 0; q < m; ++q) {
          ex += std::pow(std::abs(yb.x[q](i, k)), p);
          ey += std::pow(std::abs(yb.y[q](i, k)), p);
        }
        sx = std::max(sx, ex / m);
        sy = std::max(sy, ey / m);
      }
      CHECK(sx <= apgame::MomentBoundX(mf.drift_bounds, in, i, p));
      CHECK(sy <= apgame::MomentBoundY(mf.drift_bounds, 1.0, p, n, i == 0, 1.0));
    }
  }
}

TEST_CASE("path bundle export") {
  const auto s = apgame::testing::RandomLqSpec(19, {.n = 2, .sigma = 0.2});
  const TimeGrid g = TimeGrid::Uniform(0.5, 10);
  const auto b = apgame::SimulateState(s, StrategyProfile::Deterministic(g, MatrixXd::Zero(2, 10)),
                                       NoiseBatch::Make(3, 5, g, 2));
  const auto t = b.ToColumnTable(2, 3);
  CHECK(t.names[0] == "t");
  CHECK(t.rows() == 5);
  CHECK(t.columns.back().size() == 5);
}
