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

#include <optional>
#include <string>
#include <vector>

#include "rwndqsim/scenarios/scenario.hpp"

namespace rwndqsim::scenarios {

struct PresetOverrides {
  std::optional<double> duration_s;   // mice start scales with the duration
  std::optional<uint64_t> seed;
  bool full_length = false;           // testbed-scale 50 s runs
};

// Canned experiments, desk-scale by default (10 s simulated):
//   dumbbell_bloat  11 one-flow senders + 11 benchmark clients, one bottleneck
//   incast_50       5 hosts x 10 bulk flows into one receiver
//   incast_200      5 hosts x 40 bulk flows into one receiver
//   bloat_50_30     incast_50 plus 30 benchmark clients against the senders
//   bloat_200_30    incast_200 plus the same 30 clients
// All use 1 Gb/s links, 85,300-byte port buffers and a ~200 us base RTT.
// Throws ScenarioError for an unknown name, listing the available presets.
Scenario preset(const std::string& name, const PresetOverrides& ov = {});

std::vector<std::string> preset_names();

}  // namespace rwndqsim::scenarios
