// Copyright 2026 The gibbsgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GIBBSGEN_MATHUTIL_H_
#define GIBBSGEN_MATHUTIL_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>

namespace gibbsgen {

using Rng = std::mt19937_64;

// log(sum(exp(v))); -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> v) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

// Draws an index with probability proportional to exp(log_weights[i]).
// Uses a single uniform variate, so streams are reproducible per seed.
inline std::size_t sample_log_weights(std::span<const double> log_weights,
                                      Rng& rng) {
  const double z = log_sum_exp(log_weights);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    const double p = std::exp(log_weights[i] - z);
    if (p <= 0.0) continue;
    last = i;
    acc += p;
    if (u < acc) return i;
  }
  return last;  // rounding left u past the final bucket
}

}  // namespace gibbsgen

#endif  // GIBBSGEN_MATHUTIL_H_
