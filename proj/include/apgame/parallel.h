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

#ifndef APGAME_PARALLEL_H_
#define APGAME_PARALLEL_H_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace apgame {

// APGAME_WORKERS if set and positive, else the hardware thread count.
inline int WorkerCount() {
  if (const char* env = std::getenv("APGAME_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs f(k) for k in [0, n) on a fixed partition. Results must be written
// to per-index slots; reductions happen afterwards in index order.
template <typename F>
void ParallelFor(int n, F&& f) {
  const int workers = std::min(WorkerCount(), std::max(n, 1));
  if (workers <= 1) {
    for (int k = 0; k < n; ++k) f(k);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int k = w; k < n; k += workers) f(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Fixed-tree pairwise summation.
inline double PairwiseSum(const double* v, int n) {
  if (n <= 8) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += v[k];
    return s;
  }
  const int h = n / 2;
  return PairwiseSum(v, h) + PairwiseSum(v + h, n - h);
}

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean and sample standard error (0 for a single sample).
inline SampleStats MeanAndStdError(const std::vector<double>& v) {
  SampleStats s;
  const int n = static_cast<int>(v.size());
  if (n == 0) return s;
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) {
    s.mean = v[0];
    return s;
  }
  s.mean = PairwiseSum(v.data(), n) / n;
  if (n < 2) return s;
  std::vector<double> sq(n);
  for (int k = 0; k < n; ++k) sq[k] = (v[k] - s.mean) * (v[k] - s.mean);
  const double var = PairwiseSum(sq.data(), n) / (n - 1);
  s.std_error = std::sqrt(var / n);
  return s;
}

}  // namespace apgame

#endif  // APGAME_PARALLEL_H_
