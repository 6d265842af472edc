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
#include <string>

#include "rwndqsim/simengine/time.hpp"

namespace rwndqsim::simengine {

// Point-to-point full-duplex link. Each end terminates in a port on its
// node; a packet leaves the sending port after its serialization time and
// arrives at the far node one propagation delay later.
struct Link {
  std::string name;
  uint64_t rate_bps = 0;
  SimTime prop_delay_us = 0;
  uint32_t node_a = 0;
  uint32_t node_b = 0;
  uint16_t port_a = 0;  // port index at node_a
  uint16_t port_b = 0;  // port index at node_b
  int label = 0;        // instrumented bottleneck label, a->b direction
};

}  // namespace rwndqsim::simengine
