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
#include <span>
#include <unordered_map>
#include <vector>

#include "rwndqsim/rwndq/config.hpp"
#include "rwndqsim/rwndq/port_state.hpp"
#include "rwndqsim/wirecodec/tcp_segment.hpp"

namespace rwndqsim::rwndq {

// One switching point's worth of RWNDQ state: per-port control state plus a
// flow table that keeps retransmitted SYN-ACKs and FINs from double-counting.
// The table holds no per-flow rate state, only open/closed markers; entries
// are dropped once both directions have closed.
class SwitchDaemon {
 public:
  struct Intercept {
    bool counted_open = false;
    bool counted_close = false;
    bool rewritten = false;
  };

  SwitchDaemon(RwndqConfig cfg, std::span<const uint64_t> port_queue_limits);

  // The per-segment hook, run at the forwarding stage after the routing
  // decision. `ingress`/`egress` are port indices; pass std::nullopt for a
  // locally originated or locally delivered leg. The verdict is always
  // "forward" -- this scheme never drops; dropping stays with the queue.
  Intercept intercept(wirecodec::TcpSegmentView& segment,
                      std::optional<uint16_t> ingress,
                      std::optional<uint16_t> egress);

  // One daemon pass over all ports, in port order. `backlogs[i]` is the
  // current queue occupancy of port i.
  void run_tick_pass(std::span<const uint64_t> backlogs);

  bool any_active() const;
  std::optional<uint64_t> next_deadline(uint64_t now_us) const {
    return commit_schedule(cfg_, any_active(), now_us);
  }

  size_t port_count() const { return ports_.size(); }
  PortState& port(size_t i) { return ports_[i]; }
  const PortState& port(size_t i) const { return ports_[i]; }
  const RwndqConfig& config() const { return cfg_; }

  uint64_t total_anomalies() const;

 private:
  struct FlowEntry {
    bool opened = false;
    bool closed_dir[2] = {false, false};
  };
  // Endpoints packed as (ip << 16) | port, lower endpoint first.
  struct FlowKey {
    uint64_t a = 0;
    uint64_t b = 0;
    bool operator==(const FlowKey&) const = default;
  };
  struct FlowKeyHash {
    size_t operator()(const FlowKey& k) const {
      uint64_t h = k.a * 0x9e3779b97f4a7c15ull;
      h ^= k.b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return static_cast<size_t>(h);
    }
  };

  RwndqConfig cfg_;
  std::vector<PortState> ports_;
  std::unordered_map<FlowKey, FlowEntry, FlowKeyHash> flows_;

  // dir is 0 when the segment travels from the lower endpoint to the higher.
  static FlowKey flow_key(const wirecodec::TcpSegmentView& seg, int& dir);
};

}  // namespace rwndqsim::rwndq
