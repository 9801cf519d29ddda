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

#include "apgame/time_grid.h"

#include <algorithm>
#include <cmath>

#include "apgame/errors.h"

namespace apgame {

TimeGrid TimeGrid::Uniform(double horizon, int n_steps) {
  if (n_steps < 2) throw ConfigError("n_steps must be >= 2", "grid.n_steps");
  if (!(horizon > 0)) throw ConfigError("horizon must be > 0", "grid.horizon");
  TimeGrid g;
  g.t_.resize(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) g.t_[k] = horizon * k / n_steps;
  g.t_.back() = horizon;
  g.uniform_ = true;
  return g;
}

TimeGrid TimeGrid::FromKnots(std::vector<double> knots) {
  if (knots.size() < 3) throw ConfigError("need >= 2 steps", "grid.knots");
  if (knots.front() != 0.0) throw ConfigError("t_0 must be 0", "grid.knots[0]");
  for (size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k] > knots[k - 1])) {
      throw ConfigError("knots must be strictly increasing",
                        "grid.knots[" + std::to_string(k) + "]");
    }
  }
  TimeGrid g;
  g.t_ = std::move(knots);
  const double h0 = g.t_[1] - g.t_[0];
  g.uniform_ = true;
  for (int k = 1; k < g.n_steps(); ++k) {
    if (std::abs(g.dt(k) - h0) > 1e-12 * g.horizon()) g.uniform_ = false;
  }
  return g;
}

TimeGrid TimeGrid::Default(double horizon) {
  const int n = std::max(200, static_cast<int>(std::ceil(400.0 * horizon)));
  return Uniform(horizon, n);
}

int TimeGrid::Locate(double s) const {
  if (s <= t_.front()) return 0;
  if (s >= t_.back()) return n_steps() - 1;
  if (uniform_) {
    int k = static_cast<int>(s / t_.back() * n_steps());
    k = std::clamp(k, 0, n_steps() - 1);
    while (k > 0 && t_[k] > s) --k;
    while (k < n_steps() - 1 && t_[k + 1] <= s) ++k;
    return k;
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), s);
  return std::clamp(static_cast<int>(it - t_.begin()) - 1, 0, n_steps() - 1);
}

}  // namespace apgame
