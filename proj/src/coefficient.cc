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

#include "apgame/coefficient.h"

#include <algorithm>
#include <cmath>

#include "apgame/errors.h"

namespace apgame {

using nlohmann::json;

Coefficient Coefficient::Constant(double c) {
  Coefficient k;
  k.kind_ = Kind::kConstant;
  k.p_ = {c};
  return k;
}

Coefficient Coefficient::Affine(double intercept, double slope) {
  Coefficient k;
  k.kind_ = Kind::kAffine;
  k.p_ = {intercept, slope};
  return k;
}

Coefficient Coefficient::Sinusoid(double offset, double amplitude,
                                  double frequency, double phase) {
  Coefficient k;
  k.kind_ = Kind::kSinusoid;
  k.p_ = {offset, amplitude, frequency, phase};
  return k;
}

Coefficient Coefficient::Tabulated(std::vector<double> t,
                                   std::vector<double> v) {
  if (t.size() != v.size() || t.empty()) {
    throw ConfigError("tabulated coefficient needs equal-length t and v",
                      "t");
  }
  for (size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] > t[k - 1])) {
      throw ConfigError("tabulated t must be strictly increasing", "t");
    }
  }
  Coefficient k;
  k.kind_ = Kind::kTabulated;
  k.p_.clear();
  k.tt_ = std::move(t);
  k.tv_ = std::move(v);
  return k;
}

double Coefficient::operator()(double t) const {
  switch (kind_) {
    case Kind::kConstant:
      return p_[0];
    case Kind::kAffine:
      return p_[0] + p_[1] * t;
    case Kind::kSinusoid:
      return p_[0] + p_[1] * std::sin(p_[2] * t + p_[3]);
    case Kind::kTabulated: {
      if (t <= tt_.front()) return tv_.front();
      if (t >= tt_.back()) return tv_.back();
      auto it = std::upper_bound(tt_.begin(), tt_.end(), t);
      const size_t k = static_cast<size_t>(it - tt_.begin()) - 1;
      const double w = (t - tt_[k]) / (tt_[k + 1] - tt_[k]);
      return (1 - w) * tv_[k] + w * tv_[k + 1];
    }
  }
  return 0.0;
}

double Coefficient::SupAbs(double horizon) const {
  if (kind_ == Kind::kConstant) return std::abs(p_[0]);
  double m = 0.0;
  const int n = 4000;
  for (int k = 0; k <= n; ++k) m = std::max(m, std::abs((*this)(horizon * k / n)));
  if (kind_ == Kind::kTabulated) {
    for (size_t k = 0; k < tt_.size(); ++k) {
      if (tt_[k] >= 0 && tt_[k] <= horizon) m = std::max(m, std::abs(tv_[k]));
    }
  }
  return m;
}

double Coefficient::LpNorm(double p, double horizon, int n) const {
  if (kind_ == Kind::kConstant) {
    return std::abs(p_[0]) * std::pow(horizon, 1.0 / p);
  }
  const double h = horizon / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    s += w * std::pow(std::abs((*this)(k * h)), p);
  }
  return std::pow(s * h, 1.0 / p);
}

json Coefficient::ToJson() const {
  switch (kind_) {
    case Kind::kConstant:
      return json{{"kind", "constant"}, {"value", p_[0]}};
    case Kind::kAffine:
      return json{{"kind", "affine"}, {"intercept", p_[0]}, {"slope", p_[1]}};
    case Kind::kSinusoid:
      return json{{"kind", "sinusoid"},  {"offset", p_[0]},
                  {"amplitude", p_[1]},  {"frequency", p_[2]},
                  {"phase", p_[3]}};
    case Kind::kTabulated:
      return json{{"kind", "tabulated"}, {"t", tt_}, {"v", tv_}};
  }
  return json();
}

namespace {

double Num(const json& j, const char* key, const std::string& path,
           bool required = true, double fallback = 0.0) {
  if (!j.contains(key)) {
    if (required) {
      throw ConfigError(std::string("schema violation: missing ") + path +
                            "." + key,
                        path + "." + key);
    }
    return fallback;
  }
  if (!j.at(key).is_number()) {
    throw ConfigError("schema violation: " + path + "." + key +
                          " must be a number",
                      path + "." + key);
  }
  return j.at(key).get<double>();
}

std::vector<double> NumList(const json& j, const char* key,
                            const std::string& path) {
  const std::string p = path + "." + key;
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ConfigError("schema violation: " + p + " must be an array", p);
  }
  std::vector<double> out;
  for (size_t k = 0; k < j.at(key).size(); ++k) {
    const json& e = j.at(key)[k];
    if (!e.is_number()) {
      throw ConfigError("schema violation: " + p + "[" + std::to_string(k) +
                            "] must be a number",
                        p + "[" + std::to_string(k) + "]");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Coefficient Coefficient::FromJson(const json& j, const std::string& path) {
  if (j.is_number()) return Constant(j.get<double>());
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("schema violation: " + path +
                          " must be a number or an object with a kind",
                      path);
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return Constant(Num(j, "value", path));
  if (kind == "affine") {
    return Affine(Num(j, "intercept", path), Num(j, "slope", path));
  }
  if (kind == "sinusoid") {
    return Sinusoid(Num(j, "offset", path, false), Num(j, "amplitude", path),
                    Num(j, "frequency", path), Num(j, "phase", path, false));
  }
  if (kind == "tabulated") {
    auto t = NumList(j, "t", path);
    auto v = NumList(j, "v", path);
    try {
      return Tabulated(std::move(t), std::move(v));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("schema violation: ") + path + ": " +
                            e.what(),
                        path);
    }
  }
  throw ConfigError("schema violation: unknown coefficient kind '" + kind +
                        "' at " + path,
                    path + ".kind");
}

}  // namespace apgame
