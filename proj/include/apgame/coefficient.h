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

#ifndef APGAME_COEFFICIENT_H_
#define APGAME_COEFFICIENT_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace apgame {

// Time-dependent scalar coefficient a(t) or sigma(t), kept as a tagged
// descriptor so that configs round-trip.
class Coefficient {
 public:
  enum class Kind { kConstant, kAffine, kSinusoid, kTabulated };

  Coefficient() = default;
  static Coefficient Constant(double c);
  // intercept + slope * t
  static Coefficient Affine(double intercept, double slope);
  // offset + amplitude * sin(frequency * t + phase)
  static Coefficient Sinusoid(double offset, double amplitude,
                              double frequency, double phase);
  // Piecewise-linear through (t_k, v_k), constant outside.
  static Coefficient Tabulated(std::vector<double> t, std::vector<double> v);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  bool IsConstant() const { return kind_ == Kind::kConstant; }

  // max |c(t)| over a fine sampling of [0, horizon].
  double SupAbs(double horizon) const;
  // (int_0^T |c|^p dt)^{1/p} by composite trapezoid on n intervals.
  double LpNorm(double p, double horizon, int n = 2000) const;

  nlohmann::json ToJson() const;
  // Plain numbers are constants. Throws ConfigError tagged with path.
  static Coefficient FromJson(const nlohmann::json& j, const std::string& path);

  bool operator==(const Coefficient& o) const {
    return kind_ == o.kind_ && p_ == o.p_ && tt_ == o.tt_ && tv_ == o.tv_;
  }

 private:
  Kind kind_ = Kind::kConstant;
  std::vector<double> p_ = {0.0};
  std::vector<double> tt_, tv_;
};

}  // namespace apgame

#endif  // APGAME_COEFFICIENT_H_
