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

#include "apgame/game_model.h"

#include <cmath>
#include <set>
#include <string>

#include "apgame/errors.h"

namespace apgame {

using nlohmann::json;

namespace {

std::string Idx(const std::string& base, int i) {
  return base + "[" + std::to_string(i) + "]";
}

[[noreturn]] void Schema(const std::string& msg, const std::string& path) {
  throw ConfigError("schema violation: " + msg, path);
}

[[noreturn]] void Invariant(const std::string& msg, const std::string& path) {
  throw ConfigError("invariant violation: " + msg, path);
}

const json& Require(const json& g, const char* key) {
  if (!g.contains(key)) {
    Schema(std::string("missing game.") + key, std::string("game.") + key);
  }
  return g.at(key);
}

// Scalar broadcasts to length n; arrays must have length n.
Eigen::VectorXd VectorField(const json& g, const char* key, int n) {
  const std::string path = std::string("game.") + key;
  const json& v = Require(g, key);
  Eigen::VectorXd out(n);
  if (v.is_number()) {
    out.setConstant(v.get<double>());
    return out;
  }
  if (!v.is_array()) Schema(path + " must be a number or array", path);
  if (static_cast<int>(v.size()) != n) {
    Schema(path + " must have length n_players = " + std::to_string(n), path);
  }
  for (int i = 0; i < n; ++i) {
    if (!v[i].is_number()) Schema(Idx(path, i) + " must be a number", Idx(path, i));
    out(i) = v[i].get<double>();
  }
  return out;
}

std::vector<Coefficient> CoefficientField(const json& g, const char* key,
                                          int n) {
  const std::string path = std::string("game.") + key;
  const json& v = Require(g, key);
  std::vector<Coefficient> out;
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != n) {
      Schema(path + " must have length n_players = " + std::to_string(n), path);
    }
    for (int i = 0; i < n; ++i) out.push_back(Coefficient::FromJson(v[i], Idx(path, i)));
  } else {
    const Coefficient c = Coefficient::FromJson(v, path);
    out.assign(n, c);
  }
  return out;
}

Eigen::MatrixXd WeightsField(const json& g, int n) {
  const json& w = Require(g, "weights");
  if (!w.is_object()) Schema("game.weights must be an object", "game.weights");
  if (!w.contains("mode") || !w.at("mode").is_string()) {
    Schema("missing game.weights.mode", "game.weights.mode");
  }
  const std::string mode = w.at("mode").get<std::string>();
  if (mode == "matrix") {
    if (!w.contains("matrix") || !w.at("matrix").is_array()) {
      Schema("game.weights.matrix must be an array", "game.weights.matrix");
    }
    const json& m = w.at("matrix");
    if (static_cast<int>(m.size()) != n) {
      Schema("game.weights.matrix must be n_players x n_players",
             "game.weights.matrix");
    }
    Eigen::MatrixXd q(n, n);
    for (int i = 0; i < n; ++i) {
      const std::string row = Idx("game.weights.matrix", i);
      if (!m[i].is_array() || static_cast<int>(m[i].size()) != n) {
        Schema(row + " must have length n_players", row);
      }
      for (int j = 0; j < n; ++j) {
        if (!m[i][j].is_number()) Schema(Idx(row, j) + " must be a number", Idx(row, j));
        q(i, j) = m[i][j].get<double>();
      }
    }
    return q;
  }
  if (mode == "regime") {
    if (!w.contains("regime") || !w.at("regime").is_object()) {
      Schema("game.weights.regime must be an object", "game.weights.regime");
    }
    const json& r = w.at("regime");
    if (!r.contains("kind") || !r.at("kind").is_string()) {
      Schema("missing game.weights.regime.kind", "game.weights.regime.kind");
    }
    Regime kind;
    try {
      kind = ParseRegime(r.at("kind").get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), "game.weights.regime.kind");
    }
    RegimeParams p;
    if (r.contains("w")) {
      const json& wv = r.at("w");
      if (!wv.is_array() || static_cast<int>(wv.size()) != n) {
        Schema("game.weights.regime.w must have length n_players",
               "game.weights.regime.w");
      }
      for (int i = 0; i < n; ++i) {
        if (!wv[i].is_number()) {
          Schema(Idx("game.weights.regime.w", i) + " must be a number",
                 Idx("game.weights.regime.w", i));
        }
        p.w.push_back(wv[i].get<double>());
      }
    } else {
      p.w = DefaultRegimeWeights(n);
    }
    if (r.contains("beta")) p.beta = r.at("beta").get<double>();
    if (r.contains("c")) p.c = r.at("c").get<double>();
    try {
      return MakeRegimeWeights(kind, n, p);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), "game.weights.regime");
    }
  }
  Schema("game.weights.mode must be 'matrix' or 'regime'", "game.weights.mode");
}

json VectorJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

bool LqGameSpec::operator==(const LqGameSpec& o) const {
  return n_players == o.n_players && horizon == o.horizon && q == o.q &&
         gamma == o.gamma && d == o.d && x0 == o.x0 && a_fn == o.a_fn &&
         sigma_fn == o.sigma_fn && control_bound == o.control_bound;
}

void Validate(const LqGameSpec& s) {
  const int n = s.n_players;
  if (n < 1) Invariant("n_players < 1", "game.n_players");
  if (!(s.horizon > 0) || !std::isfinite(s.horizon)) {
    Invariant("horizon <= 0", "game.horizon");
  }
  if (!(s.control_bound > 0)) {
    Invariant("control_bound <= 0", "game.control_bound");
  }
  if (s.q.rows() != n || s.q.cols() != n) {
    Schema("weights must be n_players x n_players", "game.weights");
  }
  if (s.gamma.size() != n || s.d.size() != n || s.x0.size() != n ||
      static_cast<int>(s.a_fn.size()) != n ||
      static_cast<int>(s.sigma_fn.size()) != n) {
    Schema("per-player fields must have length n_players", "game");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::string p =
          "game.weights.matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!std::isfinite(s.q(i, j))) Invariant("weights[" + std::to_string(i) + "][" + std::to_string(j) + "] not finite", p);
      if (s.q(i, j) < 0) {
        Invariant("weights[" + std::to_string(i) + "][" + std::to_string(j) + "] < 0", p);
      }
    }
    if (!(s.gamma(i) >= 0)) Invariant(Idx("gamma", i) + " < 0", Idx("game.gamma", i));
    if (!std::isfinite(s.d(i))) Invariant(Idx("d", i) + " not finite", Idx("game.d", i));
    if (!std::isfinite(s.x0(i))) Invariant(Idx("x0", i) + " not finite", Idx("game.x0", i));
    const int samples = 1000;
    for (int k = 0; k <= samples; ++k) {
      const double t = s.horizon * k / samples;
      if (!std::isfinite(s.a_fn[i](t))) {
        Invariant(Idx("drift", i) + " not finite on [0,T]", Idx("game.drift", i));
      }
      if (!std::isfinite(s.sigma_fn[i](t))) {
        Invariant(Idx("vol", i) + " not finite on [0,T]", Idx("game.vol", i));
      }
    }
  }
}

Regime ParseRegime(const std::string& name) {
  if (name == "symmetric") return Regime::kSymmetric;
  if (name == "exponential") return Regime::kExponential;
  if (name == "power_law" || name == "power-law") return Regime::kPowerLaw;
  throw ConfigError("schema violation: unknown regime '" + name + "'", "regime");
}

std::string RegimeName(Regime r) {
  switch (r) {
    case Regime::kSymmetric:
      return "symmetric";
    case Regime::kExponential:
      return "exponential";
    case Regime::kPowerLaw:
      return "power_law";
  }
  return "";
}

Eigen::MatrixXd MakeRegimeWeights(Regime regime, int n,
                                  const RegimeParams& p) {
  if (n < 1) throw ConfigError("invariant violation: n < 1", "n");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  if (regime == Regime::kSymmetric) {
    if (!(p.c >= 0)) throw ConfigError("invariant violation: c < 0", "c");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) q(i, j) = p.c;
      }
    }
    return q;
  }
  if (static_cast<int>(p.w.size()) != n) {
    throw ConfigError("schema violation: w must have length n", "w");
  }
  std::set<double> seen;
  for (int i = 0; i < n; ++i) {
    if (!(p.w[i] > 0) || !std::isfinite(p.w[i])) {
      throw ConfigError("invariant violation: " + Idx("w", i) + " <= 0", Idx("w", i));
    }
    if (!seen.insert(p.w[i]).second && n > 1) {
      throw ConfigError("invariant violation: w entries must be distinct", Idx("w", i));
    }
  }
  if (regime == Regime::kPowerLaw && !(p.beta > 0 && p.beta < 1)) {
    throw ConfigError("invariant violation: beta outside (0,1)", "beta");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dist = std::abs(i - j);
      q(i, j) = regime == Regime::kExponential
                    ? p.w[i] * std::exp(-dist)
                    : p.w[i] * std::pow(dist, -p.beta);
    }
  }
  return q;
}

std::vector<double> DefaultRegimeWeights(int n) {
  std::vector<double> w(n);
  for (int i = 1; i <= n; ++i) {
    w[i - 1] = 1.0 + 0.5 * (i % 2) + 0.01 * i / n;
  }
  return w;
}

LqGameSpec GameSpecFromJson(const json& root) {
  const json& g = root.contains("game") ? root.at("game") : root;
  if (!g.is_object()) Schema("game must be an object", "game");
  LqGameSpec s;
  const json& n = Require(g, "n_players");
  if (!n.is_number_integer()) Schema("game.n_players must be an integer", "game.n_players");
  s.n_players = n.get<int>();
  if (s.n_players < 1) Invariant("n_players < 1", "game.n_players");
  const json& h = Require(g, "horizon");
  if (!h.is_number()) Schema("game.horizon must be a number", "game.horizon");
  s.horizon = h.get<double>();
  if (!(s.horizon > 0)) Invariant("horizon <= 0", "game.horizon");
  s.q = WeightsField(g, s.n_players);
  for (int i = 0; i < s.n_players; ++i) s.q(i, i) = 0.0;
  s.gamma = VectorField(g, "gamma", s.n_players);
  s.d = VectorField(g, "d", s.n_players);
  s.x0 = VectorField(g, "x0", s.n_players);
  s.a_fn = CoefficientField(g, "drift", s.n_players);
  s.sigma_fn = CoefficientField(g, "vol", s.n_players);
  if (g.contains("control_bound")) {
    if (!g.at("control_bound").is_number()) {
      Schema("game.control_bound must be a number", "game.control_bound");
    }
    s.control_bound = g.at("control_bound").get<double>();
  }
  Validate(s);
  return s;
}

LqGameSpec ParseGameSpec(const std::string& config_text) {
  json root;
  try {
    root = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("schema violation: not valid JSON: ") + e.what(), "");
  }
  return GameSpecFromJson(root);
}

json SerializeGameSpec(const LqGameSpec& s) {
  json m = json::array();
  for (int i = 0; i < s.n_players; ++i) {
    m.push_back(VectorJson(s.q.row(i).transpose()));
  }
  json a = json::array(), v = json::array();
  for (const auto& c : s.a_fn) a.push_back(c.ToJson());
  for (const auto& c : s.sigma_fn) v.push_back(c.ToJson());
  json g;
  g["n_players"] = s.n_players;
  g["horizon"] = s.horizon;
  g["weights"] = {{"mode", "matrix"}, {"matrix", m}};
  g["gamma"] = VectorJson(s.gamma);
  g["d"] = VectorJson(s.d);
  g["x0"] = VectorJson(s.x0);
  g["drift"] = a;
  g["vol"] = v;
  g["control_bound"] = s.control_bound;
  return json{{"game", g}};
}

Eigen::VectorXd LiftedMatrices::ADiag(double t) const {
  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a(i) = a_fn[i](t);
  return a;
}

Eigen::VectorXd LiftedMatrices::SigmaDiag(double t) const {
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = sigma_fn[i](t);
  return s;
}

Eigen::MatrixXd LiftedMatrices::A(double t) const {
  const Eigen::VectorXd a = ADiag(t);
  Eigen::VectorXd aa(2 * n);
  aa << a, a;
  return aa.asDiagonal();
}

Eigen::MatrixXd LiftedMatrices::Sigma(double t) const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, n);
  s.topRows(n) = SigmaDiag(t).asDiagonal();
  return s;
}

LiftedMatrices BuildLiftedMatrices(const LqGameSpec& spec) {
  Validate(spec);
  const int n = spec.n_players;
  LiftedMatrices m;
  m.n = n;
  m.a_fn = spec.a_fn;
  m.sigma_fn = spec.sigma_fn;
  m.q_tilde = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k != i) row += spec.q(i, k);
    }
    m.q_tilde(i, i) = row / n;
    for (int j = 0; j < n; ++j) {
      if (j != i) m.q_tilde(i, j) = -spec.q(i, j) / n;
    }
  }
  m.Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.Q.topRightCorner(n, n) = m.q_tilde.transpose();
  m.Q.bottomLeftCorner(n, n) = m.q_tilde;
  m.Q_bar = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.Q_bar.topRightCorner(n, n) = spec.gamma.asDiagonal();
  m.Q_bar.bottomLeftCorner(n, n) = spec.gamma.asDiagonal();
  m.p_vec = Eigen::VectorXd::Zero(2 * n);
  m.p_vec.tail(n) = -spec.gamma.cwiseProduct(spec.d);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  m.I_tilde.resize(n, 4 * n);
  m.I_tilde << 0.5 * id, id, id / 3.0, 0.5 * id;
  return m;
}

}  // namespace apgame
