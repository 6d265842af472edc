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
#include "rwndqsim/wirecodec/tcp_segment.hpp"

namespace rwndqsim::rwndq {

inline constexpr uint32_t kMaxTcpWindow = 65535;  // 16-bit field, no scaling

// Control state of one output queue. All quantities are bytes unless noted.
// Invariants maintained by the operations below:
//   - conncount never goes below zero (an excess close only bumps anomalies);
//   - after every commit, tcp_min_mss*conncount <= localwnd <= 65535*conncount
//     and wnd == localwnd / conncount, for conncount > 0.
struct PortState {
  uint32_t conncount = 0;   // active TCP flows crossing this port
  int64_t localwnd = 0;     // aggregate window budget for the port
  uint32_t wnd = 0;         // per-flow fair share written into ACKs
  int64_t incr = 0;         // deviation accumulated since the last commit
  bool slowstart = false;
  uint32_t mss = 1460;
  uint32_t update_count = 0;  // ticks since the last commit, in [0, M)
  uint64_t target = 0;        // queue-occupancy set point
  uint64_t limit = 0;         // queue capacity
  uint64_t anomalies = 0;     // flow-close events seen with conncount == 0
  uint64_t commits = 0;
};

PortState make_port_state(const RwndqConfig& cfg, uint64_t queue_limit_bytes);

// Flow bookkeeping for one port. A new flow on an idle port seeds the local
// window with one target's worth of bytes and enters slow-start; otherwise
// the current share is rescaled so wnd*conncount stays put (up to integer
// truncation).
void register_flow(PortState& port);

// Reverse bookkeeping on flow teardown. Rescales the share back up while
// flows remain; a close on an idle port is counted as a protocol anomaly and
// leaves the state untouched.
void deregister_flow(PortState& port);

inline void on_flow_open(PortState& ingress, PortState& egress) {
  register_flow(ingress);
  register_flow(egress);
}

inline void on_flow_close(PortState& ingress) { deregister_flow(ingress); }

// Stamps the port's fair share into the segment's receive-window field when
// the segment is an ACK advertising more than the share. Returns true when
// the field was rewritten. A rewrite never enlarges the field.
bool maybe_rewrite_ack(const PortState& ingress,
                       wirecodec::TcpSegmentView& segment);

// One pass of the window update daemon for one port. Call every
// tick_interval_us while the port has active flows, with the port's current
// queue backlog. Every cfg.commit_ticks-th call folds the accumulated
// deviation into localwnd, clamps it, and re-derives the per-flow share.
void tick(PortState& port, uint64_t backlog_bytes, const RwndqConfig& cfg);

// Next daemon deadline: now + tick interval while any port has active flows,
// otherwise the daemon goes idle until a flow-open re-arms it.
std::optional<uint64_t> commit_schedule(const RwndqConfig& cfg,
                                        bool any_active_port, uint64_t now_us);

}  // namespace rwndqsim::rwndq
