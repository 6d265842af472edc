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
#include <deque>

#include "rwndqsim/simengine/packet.hpp"

namespace rwndqsim::switchmodel {

// Byte-limited tail-drop FIFO (the classic bfifo discipline). A packet that
// would push the backlog past the limit is discarded whole; a drop is a
// modeled outcome, not an error. Backlog always equals the byte sum of the
// queued packets, including the one currently being serialized.
class DropTailQueue {
 public:
  explicit DropTailQueue(uint64_t limit_bytes) : limit_(limit_bytes) {}

  bool try_enqueue(simengine::Packet&& p) {
    const uint64_t size = p.wire_size();
    offered_packets_ += 1;
    offered_bytes_ += size;
    if (backlog_ + size > limit_) {
      drops_ += 1;
      dropped_bytes_ += size;
      return false;
    }
    backlog_ += size;
    fifo_.push_back(std::move(p));
    return true;
  }

  simengine::Packet pop_head() {
    simengine::Packet p = std::move(fifo_.front());
    fifo_.pop_front();
    backlog_ -= p.wire_size();
    dequeued_packets_ += 1;
    dequeued_bytes_ += p.wire_size();
    return p;
  }

  const simengine::Packet& head() const { return fifo_.front(); }
  bool empty() const { return fifo_.empty(); }
  size_t depth() const { return fifo_.size(); }

  uint64_t backlog() const { return backlog_; }
  uint64_t limit() const { return limit_; }
  uint64_t drops() const { return drops_; }
  uint64_t dropped_bytes() const { return dropped_bytes_; }
  uint64_t offered_packets() const { return offered_packets_; }
  uint64_t offered_bytes() const { return offered_bytes_; }
  uint64_t dequeued_packets() const { return dequeued_packets_; }
  uint64_t dequeued_bytes() const { return dequeued_bytes_; }

 private:
  uint64_t limit_;
  uint64_t backlog_ = 0;
  std::deque<simengine::Packet> fifo_;
  uint64_t drops_ = 0;
  uint64_t dropped_bytes_ = 0;
  uint64_t offered_packets_ = 0;
  uint64_t offered_bytes_ = 0;
  uint64_t dequeued_packets_ = 0;
  uint64_t dequeued_bytes_ = 0;
};

}  // namespace rwndqsim::switchmodel
