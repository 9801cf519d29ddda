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

#ifndef APGAME_TIME_GRID_H_
#define APGAME_TIME_GRID_H_

#include <vector>

namespace apgame {

class TimeGrid {
 public:
  TimeGrid() = default;
  static TimeGrid Uniform(double horizon, int n_steps);
  static TimeGrid FromKnots(std::vector<double> knots);
  // max(200, ceil(400 T)) steps.
  static TimeGrid Default(double horizon);

  int n_steps() const { return static_cast<int>(t_.size()) - 1; }
  int n_knots() const { return static_cast<int>(t_.size()); }
  double horizon() const { return t_.back(); }
  double t(int k) const { return t_[k]; }
  double dt(int k) const { return t_[k + 1] - t_[k]; }
  bool uniform() const { return uniform_; }
  const std::vector<double>& knots() const { return t_; }

  // Index k with t_k <= s < t_{k+1} (clamped to the last interval).
  int Locate(double s) const;

  bool operator==(const TimeGrid& o) const { return t_ == o.t_; }

 private:
  std::vector<double> t_;
  bool uniform_ = false;
};

}  // namespace apgame

#endif  // APGAME_TIME_GRID_H_
