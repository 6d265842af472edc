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

#pragma once

#include <span>
#include <stdexcept>

namespace rwndqsim::metrics {

struct StatsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Nearest-rank percentile: the ceil(p/100 * n)-th order statistic (at least
// the first). p must lie in [0, 100]; the sample set must be nonempty.
double percentile(std::span<const double> samples, double p);

// Jain's fairness index (sum x)^2 / (n * sum x^2), in (0, 1]. Requires a
// nonempty, nonnegative input with at least one positive entry.
double jain_index(std::span<const double> xs);

double mean(std::span<const double> xs);

// Population variance.
double variance(std::span<const double> xs);

}  // namespace rwndqsim::metrics
