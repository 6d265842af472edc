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

#include "rwndqsim/simengine/engine.hpp"

#include <algorithm>

namespace rwndqsim::simengine {

void Engine::push(Event&& ev) {
  if (ev.time < clock_) {
    throw SimulationBug("event scheduled into the past");
  }
  ev.seq = next_seq_++;
  heap_.push_back(std::move(ev));
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

Event Engine::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Event ev = std::move(heap_.back());
  heap_.pop_back();
  return ev;
}

void Engine::schedule(SimTime t, EventKind kind, uint32_t target,
                      uint32_t aux) {
  Event ev;
  ev.time = t;
  ev.kind = kind;
  ev.target = target;
  ev.aux = aux;
  push(std::move(ev));
}

void Engine::schedule_packet(SimTime t, uint32_t target_node,
                             uint32_t ingress_port, Packet&& packet) {
  Event ev;
  ev.time = t;
  ev.kind = EventKind::PacketArrival;
  ev.target = target_node;
  ev.aux = ingress_port;
  ev.packet = std::move(packet);
  push(std::move(ev));
}

SimTime Engine::run_until(SimTime t_end, EventSink& sink) {
  while (!heap_.empty() && heap_.front().time < t_end) {
    Event ev = pop();
    clock_ = ev.time;
    sink.on_event(ev);
  }
  if (!heap_.empty()) {
    clock_ = t_end;
  }
  return clock_;
}

}  // namespace rwndqsim::simengine
