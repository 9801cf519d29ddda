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
#include <string>

#include "apgame/alpha_bounds.h"
#include "apgame/errors.h"
#include "apgame/game_model.h"
#include "doctest.h"
#include "test_util.h"

using apgame::ConfigError;
using apgame::LqGameSpec;
using apgame::Regime;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const char* kPairConfig = R"({
  "game": {
    "n_players": 2, "horizon": 1.0,
    "weights": {"mode": "matrix", "matrix": [[0, 1], [1, 0]]},
    "gamma": [1, 1], "d": [0, 0], "x0": [0, 0],
    "drift": 0.0, "vol": 1.0
  }
})";

}  // namespace

TEST_CASE("explicit config fields round-trip") {
  const LqGameSpec s = apgame::ParseGameSpec(kPairConfig);
  CHECK(s.n_players == 2);
  CHECK(s.horizon == 1.0);
  CHECK(s.q(0, 1) == 1.0);
  CHECK(s.q(1, 0) == 1.0);
  CHECK(s.gamma == VectorXd::Ones(2));
  CHECK(s.sigma_fn[1](0.3) == 1.0);
  CHECK(s.a_fn[0](0.7) == 0.0);
  const std::string again = apgame::SerializeGameSpec(s).dump();
  CHECK(apgame::ParseGameSpec(again) == s);
}

TEST_CASE("regime descriptor expands to exponential weights") {
  const LqGameSpec s = apgame::ParseGameSpec(R"({
    "n_players": 2, "horizon": 1,
    "weights": {"mode": "regime", "regime": {"kind": "exponential", "w": [1, 2]}},
    "gamma": 1, "d": 0, "x0": 0, "drift": 0, "vol": 1})");
  CHECK(s.q(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(s.q(1, 0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("negative gamma is reported with its field path") {
  try {
    apgame::ParseGameSpec(R"({"n_players": 1, "horizon": 1,
      "weights": {"mode": "matrix", "matrix": [[0]]},
      "gamma": [-1], "d": [0], "x0": [0], "drift": 0, "vol": 0})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "invariant violation: gamma[0] < 0");
    CHECK(e.field_path() == "game.gamma[0]");
  }
}

TEST_CASE("schema and invariant violations") {
  CHECK_THROWS_AS(apgame::ParseGameSpec(R"({"n_players": 2})"), ConfigError);
  CHECK_THROWS_AS(apgame::ParseGameSpec(R"({"n_players": 1, "horizon": 0,
      "weights": {"mode": "matrix", "matrix": [[0]]},
      "gamma": [1], "d": [0], "x0": [0], "drift": 0, "vol": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(apgame::ParseGameSpec(R"({"n_players": 2, "horizon": 1,
      "weights": {"mode": "matrix", "matrix": [[0, -1], [1, 0]]},
      "gamma": 1, "d": 0, "x0": 0, "drift": 0, "vol": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(apgame::ParseGameSpec(R"({"n_players": 2, "horizon": 1,
      "weights": {"mode": "matrix", "matrix": [[0, 1], [1, 0]]},
      "gamma": "x", "d": 0, "x0": 0, "drift": 0, "vol": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(apgame::ParseGameSpec("{not json"), ConfigError);
}

TEST_CASE("coefficient descriptors") {
  const LqGameSpec s = apgame::ParseGameSpec(R"({
    "n_players": 2, "horizon": 2,
    "weights": {"mode": "matrix", "matrix": [[0, 1], [1, 0]]},
    "gamma": 1, "d": 0, "x0": 0,
    "drift": [{"kind": "affine", "intercept": 1, "slope": 2},
              {"kind": "sinusoid", "offset": 0, "amplitude": 1, "frequency": 1, "phase": 0}],
    "vol": {"kind": "tabulated", "t": [0, 2], "v": [0, 4]}})");
  CHECK(s.a_fn[0](0.5) == doctest::Approx(2.0));
  CHECK(s.a_fn[1](0.5) == doctest::Approx(std::sin(0.5)));
  CHECK(s.sigma_fn[0](1.0) == doctest::Approx(2.0));
  CHECK(s.sigma_fn[1](3.0) == doctest::Approx(4.0));
  CHECK(apgame::ParseGameSpec(apgame::SerializeGameSpec(s).dump()) == s);
}

TEST_CASE("regime weights") {
  apgame::RegimeParams p;
  p.w = {1.0, 1.5, 2.0};
  const MatrixXd e = apgame::MakeRegimeWeights(Regime::kExponential, 3, p);
  CHECK(e(0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(e(2, 0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(e(1, 1) == 0.0);

  // The distinctness requirement is about the exponential/power-law
  // asymmetry; equal weights are rejected.
  apgame::RegimeParams eq;
  eq.w = {1.0, 1.0, 1.0};
  eq.beta = 0.5;
  CHECK_THROWS(apgame::MakeRegimeWeights(Regime::kPowerLaw, 3, eq));
  apgame::RegimeParams pl;
  pl.w = {1.0, 1.1, 1.2};
  pl.beta = 0.5;
  const MatrixXd w = apgame::MakeRegimeWeights(Regime::kPowerLaw, 3, pl);
  CHECK(w(0, 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  apgame::RegimeParams sym;
  sym.c = 1.0;
  const MatrixXd s = apgame::MakeRegimeWeights(Regime::kSymmetric, 2, sym);
  CHECK(s == (MatrixXd(2, 2) << 0, 1, 1, 0).finished());
  const MatrixXd s5 = apgame::MakeRegimeWeights(Regime::kSymmetric, 5, sym);
  CHECK(apgame::AsymmetryIndex(s5) == 0.0);

  pl.beta = 1.0;
  CHECK_THROWS(apgame::MakeRegimeWeights(Regime::kPowerLaw, 3, pl));
  pl.beta = 0.5;
  pl.w = {1.0, -1.0, 2.0};
  CHECK_THROWS(apgame::MakeRegimeWeights(Regime::kExponential, 3, pl));
  CHECK(apgame::ParseRegime("power-law") == Regime::kPowerLaw);
  CHECK_THROWS(apgame::ParseRegime("cubic"));
}

TEST_CASE("lifted matrices") {
  LqGameSpec one = apgame::testing::SimpleSpec(1, 1.0, 0.0, 1.0, 2.0, 0.0);
  const auto lm1 = apgame::BuildLiftedMatrices(one);
  CHECK(lm1.p_vec == (VectorXd(2) << 0.0, -2.0).finished());

  LqGameSpec two = apgame::testing::SimpleSpec(2, 1.0, 0.0, 1.0, 0.0, 0.0);
  two.q << 0, 4, 2, 0;
  const auto lm2 = apgame::BuildLiftedMatrices(two);
  CHECK(lm2.q_tilde == (MatrixXd(2, 2) << 2, -2, -1, 1).finished());

  const auto s = apgame::testing::RandomLqSpec(11, {.n = 4, .symmetric = false, .time_varying = true});
  const auto lm = apgame::BuildLiftedMatrices(s);
  CHECK((lm.q_tilde * VectorXd::Ones(4)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(lm.Q == lm.Q.transpose());
  CHECK(lm.Q_bar == lm.Q_bar.transpose());
  CHECK(lm.Q.topLeftCorner(4, 4).isZero(0.0));
  CHECK(lm.Q.bottomRightCorner(4, 4).isZero(0.0));
  CHECK(lm.Q_bar.topLeftCorner(4, 4).isZero(0.0));
  CHECK(lm.I_tilde(0, 0) == 0.5);
  CHECK(lm.I_tilde(0, 4) == 1.0);
  CHECK(lm.I_tilde(0, 8) == 1.0 / 3.0);
  CHECK(lm.I_tilde(0, 12) == 0.5);
  CHECK(lm.I_tilde(0, 1) == 0.0);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 10; ++rep) {
    VectorXd x(4), y(4);
    for (int k = 0; k < 4; ++k) {
      x(k) = nd(gen);
      y(k) = nd(gen);
    }
    VectorXd xx(8);
    xx << x, y;
    CHECK(xx.dot(lm.Q * xx) == doctest::Approx(2.0 * y.dot(lm.q_tilde * x)).epsilon(1e-12));
  }
  const double t = 0.3;
  const MatrixXd a = lm.A(t);
  for (int i = 0; i < 4; ++i) {
    CHECK(a(i, i) == s.a_fn[i](t));
    CHECK(a(4 + i, 4 + i) == s.a_fn[i](t));
  }
}

TEST_CASE("spec validation on coefficients") {
  LqGameSpec s = apgame::testing::SimpleSpec(2, 1.0, 0.0, 1.0, 0.0, 0.0);
  s.control_bound = 0.0;
  CHECK_THROWS_AS(apgame::Validate(s), ConfigError);
  s.control_bound = 1.0;
  s.a_fn[0] = apgame::Coefficient::Constant(std::nan(""));
  CHECK_THROWS_AS(apgame::Validate(s), ConfigError);
}
