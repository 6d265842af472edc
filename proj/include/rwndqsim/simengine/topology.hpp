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
#include <stdexcept>
#include <string>
#include <vector>

#include "rwndqsim/simengine/time.hpp"
#include "rwndqsim/switchmodel/node.hpp"

namespace rwndqsim::simengine {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinkSpec {
  std::string name;
  std::string a;
  std::string b;
  uint64_t rate_bps = 0;
  SimTime delay_us = 0;
  uint64_t queue_bytes = 0;
  int label = 0;  // instrumented bottleneck number for the a->b direction
};

struct TopologySpec {
  std::vector<std::string> hosts;
  std::vector<std::string> switches;
  std::vector<LinkSpec> links;
};

// Assembles the entity graph and computes static shortest-path routes from
// every node toward every host. Hosts receive addresses 10.0.x.y in listing
// order. Throws ConfigError for unknown endpoints, duplicate names, or a
// disconnected graph (the message lists the unreachable host pairs).
switchmodel::Network build_topology(const TopologySpec& spec);

}  // namespace rwndqsim::simengine
