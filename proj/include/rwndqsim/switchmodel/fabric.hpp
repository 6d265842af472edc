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

#include "rwndqsim/rwndq/config.hpp"
#include "rwndqsim/simengine/engine.hpp"
#include "rwndqsim/switchmodel/node.hpp"

namespace rwndqsim::switchmodel {

// Hands packets addressed to a node's own IP to the endpoint layer.
struct LocalDelivery {
  virtual ~LocalDelivery() = default;
  virtual void deliver(uint32_t node, simengine::Packet&& pkt,
                       simengine::SimTime now) = 0;
};

struct PacketTrace {
  virtual ~PacketTrace() = default;
  virtual void record(simengine::SimTime now, const char* event,
                      const std::string& port_id,
                      const simengine::Packet& pkt, uint64_t backlog) = 0;
};

// Packet movement through nodes, queues and links. Forwarding is static;
// the RWNDQ hook runs right after the routing decision and before the
// packet is enqueued, on nodes whose daemon is engaged.
class Fabric {
 public:
  Fabric(Network& net, simengine::Engine& engine, LocalDelivery& delivery)
      : net_(net), engine_(engine), delivery_(delivery) {}

  void set_trace(PacketTrace* trace) { trace_ = trace; }

  // Locally originated packet entering the node's forwarding path.
  void inject(uint32_t node, simengine::Packet&& pkt);

  void on_arrival(uint32_t node, uint16_t ingress_port,
                  simengine::Packet&& pkt);
  void on_transmit_complete(uint32_t node, uint16_t port);
  void on_rwndq_tick(uint32_t node);

 private:
  void forward(uint32_t node_id, std::optional<uint16_t> ingress,
               simengine::Packet&& pkt);
  void run_daemon_hook(uint32_t node_id, std::optional<uint16_t> ingress,
                       std::optional<uint16_t> egress, simengine::Packet& pkt);
  void enqueue(uint32_t node_id, uint16_t port_idx, simengine::Packet&& pkt);
  void start_transmit(uint32_t node_id, uint16_t port_idx);
  void arm_daemon(uint32_t node_id);

  Network& net_;
  simengine::Engine& engine_;
  LocalDelivery& delivery_;
  PacketTrace* trace_ = nullptr;
  std::vector<uint64_t> backlog_scratch_;
};

// Engages the window-rewriting daemon on every node (the rwndq discipline).
void enable_rwndq(Network& net, const rwndq::RwndqConfig& cfg);

}  // namespace rwndqsim::switchmodel
