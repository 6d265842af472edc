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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rwndqsim/rwndq/daemon.hpp"
#include "rwndqsim/simengine/link.hpp"
#include "rwndqsim/simengine/time.hpp"
#include "rwndqsim/switchmodel/drop_tail_queue.hpp"

namespace rwndqsim::switchmodel {

// An output-queued port. The head packet stays in the queue (and in the
// backlog) while it serializes; `transmitting` is true exactly while a
// TransmitComplete event is pending for this port.
struct SwitchPort {
  SwitchPort(uint64_t queue_limit, uint64_t rate_bps, uint32_t link,
             bool a_end, std::string id, int lbl)
      : queue(queue_limit),
        line_rate_bps(rate_bps),
        link_id(link),
        is_a_end(a_end),
        report_id(std::move(id)),
        label(lbl) {}

  DropTailQueue queue;
  uint64_t line_rate_bps;
  uint32_t link_id;
  bool is_a_end;             // which end of the link this port sits on
  std::string report_id;     // e.g. "l6:fwd"
  int label;                 // instrumented bottleneck label (0 = none)
  bool transmitting = false;

  // Time integral of the backlog, for occupancy averages.
  uint64_t backlog_integral_byte_us = 0;
  simengine::SimTime backlog_changed_at = 0;

  void account_backlog(simengine::SimTime now) {
    backlog_integral_byte_us +=
        queue.backlog() * (now - backlog_changed_at);
    backlog_changed_at = now;
  }
};

// A switching point or an end host. Hosts are nodes with endpoints attached;
// a multi-tenant sender host is simply a node whose single egress port is
// shared by all its local flows.
struct Node {
  std::string name;
  bool is_host = false;
  uint32_t ip = 0;  // hosts only
  std::vector<SwitchPort> ports;
  std::unordered_map<uint32_t, uint16_t> routes;  // destination ip -> port
  std::optional<rwndq::SwitchDaemon> daemon;      // engaged under rwndq
  bool tick_armed = false;
  uint64_t no_route_drops = 0;
};

struct Network {
  std::vector<Node> nodes;
  std::vector<simengine::Link> links;
  std::unordered_map<std::string, uint32_t> node_ids;
  std::unordered_map<uint32_t, uint32_t> host_by_ip;

  Node& node_named(const std::string& name);
  uint32_t id_of(const std::string& name) const;
};

}  // namespace rwndqsim::switchmodel
