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

#include <string>
#include <vector>

#include "rwndqsim/metrics/report.hpp"
#include "rwndqsim/scenarios/scenario.hpp"
#include "rwndqsim/simengine/time.hpp"
#include "rwndqsim/switchmodel/fabric.hpp"

namespace rwndqsim::metrics {

struct RunOptions {
  bool trace = false;
  std::string trace_dir;  // packets.log and rwndq_state.csv land here
  // Observes every queue event instead of the file tracer; for tests.
  switchmodel::PacketTrace* observer = nullptr;
};

// Start times after seed-driven jitter, in listing order. Shared between the
// runner and the A/B purity checks: the schedule depends on the seed only,
// never on the discipline.
struct RealizedSchedule {
  std::vector<simengine::SimTime> elephant_starts;
  std::vector<simengine::SimTime> elephant_stops;  // 0 = runs to the end
  std::vector<simengine::SimTime> mice_starts;
};

RealizedSchedule realize_schedule(const scenarios::Scenario& sc);

// Executes one (scenario, discipline, seed) run to completion and collects
// its metrics. Deterministic: identical inputs give identical reports.
MetricsReport run_scenario(const scenarios::Scenario& sc,
                           const RunOptions& opts = {});

}  // namespace rwndqsim::metrics
