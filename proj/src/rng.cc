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

#include "apgame/rng.h"

#include <cmath>

namespace apgame {

std::array<double, 2> Philox4x32::Normals(const Counter& c) const {
  const auto u = Uniforms(c);
  const double r = std::sqrt(-2.0 * std::log(u[0]));
  const double a = 2.0 * M_PI * u[1];
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace apgame
