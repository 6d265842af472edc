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

#include "rwndqsim/endhost/tcp_flow.hpp"
#include "rwndqsim/rwndq/config.hpp"
#include "rwndqsim/simengine/topology.hpp"

namespace rwndqsim::scenarios {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Discipline : uint8_t { Fifo, Rwndq };

std::string to_string(Discipline d);
Discipline discipline_from_string(const std::string& s);

// Bulk senders: `count` long-lived flows from src to dst, each starting at
// start_s (plus jitter) and running for duration_s (0 = until the run ends).
struct ElephantGroup {
  std::string src;
  std::string dst;
  uint32_t count = 1;
  double start_s = 0.0;
  double duration_s = 0.0;
};

// Benchmark clients: `clients` independent sessions on client_host, each
// issuing request_count sequential requests against a web server on
// server_host.
struct MiceGroup {
  std::string client;
  std::string server;
  uint32_t clients = 1;
  uint32_t requests = 1000;
  uint64_t response_bytes = 11500;
  uint32_t request_bytes = 230;
  double start_s = 0.0;
};

// A complete experiment: topology, traffic, timing, and the knobs of both
// the queue discipline under test and the TCP stacks. Everything except
// `discipline` is identical between the two arms of an A/B comparison.
struct Scenario {
  std::string name;
  Discipline discipline = Discipline::Fifo;
  simengine::TopologySpec topology;
  std::vector<ElephantGroup> elephants;
  std::vector<MiceGroup> mice;
  double duration_s = 10.0;
  double sample_interval_s = 0.5;
  double warmup_s = 2.0;
  uint64_t seed = 1;
  uint32_t start_jitter_us = 1000;
  rwndq::RwndqConfig rwndq;
  endhost::TcpConfig tcp;
};

}  // namespace rwndqsim::scenarios
