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
#include <vector>

#include "rwndqsim/simengine/packet.hpp"
#include "rwndqsim/simengine/time.hpp"

namespace rwndqsim::simengine {

enum class EventKind : uint8_t {
  PacketArrival,     // target: node id, aux: ingress port index
  TransmitComplete,  // target: node id, aux: port index
  RwndqTick,         // target: node id
  AppStart,          // target: app index, aux: 0 = start, 1 = stop
  RtoExpiry,         // target: connection index, aux: side (0 = client)
  SampleTick,        // target: unused
};

struct Event {
  SimTime time = 0;
  uint64_t seq = 0;  // schedule-order tie break
  EventKind kind{};
  uint32_t target = 0;
  uint32_t aux = 0;
  Packet packet{};  // only meaningful for PacketArrival
};

struct EventSink {
  virtual ~EventSink() = default;
  virtual void on_event(Event& ev) = 0;
};

// Deterministic discrete-event loop. Events run in (time, schedule order);
// scheduling into the past throws SimulationBug.
class Engine {
 public:
  SimTime now() const { return clock_; }
  size_t pending() const { return heap_.size(); }

  void schedule(SimTime t, EventKind kind, uint32_t target, uint32_t aux = 0);
  void schedule_packet(SimTime t, uint32_t target_node, uint32_t ingress_port,
                       Packet&& packet);

  // Dispatches events with time < t_end in order. Returns the final clock:
  // t_end when events remain, the last event time (or the unchanged clock)
  // when the queue drains first.
  SimTime run_until(SimTime t_end, EventSink& sink);

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) {
        return a.time > b.time;
      }
      return a.seq > b.seq;
    }
  };

  void push(Event&& ev);
  Event pop();

  std::vector<Event> heap_;
  SimTime clock_ = 0;
  uint64_t next_seq_ = 0;
};

}  // namespace rwndqsim::simengine
