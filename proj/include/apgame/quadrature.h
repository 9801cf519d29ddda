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

#ifndef APGAME_QUADRATURE_H_
#define APGAME_QUADRATURE_H_

#include <vector>

namespace apgame {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// k-point Gauss-Legendre rule mapped to [0, 1].
QuadratureRule GaussLegendre01(int k);

}  // namespace apgame

#endif  // APGAME_QUADRATURE_H_
