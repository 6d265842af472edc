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

#include <cstdint>

namespace rwndqsim::rwndq {

// Knobs of the per-port window update daemon. Defaults suit a network with a
// base RTT around 200us; tick_interval_us must stay below the base RTT so the
// daemon observes the queue at sub-RTT granularity.
struct RwndqConfig {
  uint32_t commit_ticks = 5;        // accumulation ticks per local-window commit (M)
  uint64_t tick_interval_us = 100;  // daemon period
  uint32_t target_numer = 1;        // queue-occupancy set point, as a fraction
  uint32_t target_denom = 4;        //   of the queue limit (default 1/4)
  uint32_t tcp_min_mss = 536;       // lower clamp per flow, bytes
  uint32_t mss = 1460;              // segment size used by slow-start probing
};

}  // namespace rwndqsim::rwndq
