/* Copyright 2026 the rwndqsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rwndqsim/metrics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rwndqsim::metrics {

double percentile(std::span<const double> samples, double p) {
  if (samples.empty()) {
    throw StatsError("percentile of an empty sample set");
  }
  if (p < 0.0 || p > 100.0) {
    throw StatsError("percentile p outside [0, 100]");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<size_t>(std::ceil(p / 100.0 * n));
  if (rank < 1) {
    rank = 1;
  }
  return sorted[rank - 1];
}

double jain_index(std::span<const double> xs) {
  if (xs.empty()) {
    throw StatsError("fairness index of an empty set");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : xs) {
    if (x < 0.0) {
      throw StatsError("fairness index over a negative value");
    }
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) {
    throw StatsError("fairness index of an all-zero set is undefined");
  }
  return sum * sum / (static_cast<double>(xs.size()) * sum_sq);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) {
    throw StatsError("mean of an empty set");
  }
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  return sum / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.empty()) {
    throw StatsError("variance of an empty set");
  }
  const double mu = mean(xs);
  double acc = 0.0;
  for (double x : xs) {
    acc += (x - mu) * (x - mu);
  }
  return acc / static_cast<double>(xs.size());
}

}  // namespace rwndqsim::metrics
