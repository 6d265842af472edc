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
#include <limits>
#include <utility>
#include <vector>

#include "rwndqsim/endhost/tcp_flow.hpp"
#include "rwndqsim/simengine/time.hpp"

namespace rwndqsim::endhost {

inline constexpr uint64_t kFctNeverFinished =
    std::numeric_limits<uint64_t>::max();

struct FctRecord {
  uint32_t client_id = 0;
  uint32_t request_idx = 0;
  uint64_t fct_us = 0;  // kFctNeverFinished when the connection died
  bool completed = false;
};

// Services a traffic generator needs from the simulation.
struct SessionEnv {
  virtual ~SessionEnv() = default;
  // Creates a fresh connection between two hosts; returns (client, server).
  // Both halves outlive the session.
  virtual std::pair<TcpHalf*, TcpHalf*> open_connection(
      uint32_t client_host, uint32_t server_host) = 0;
  virtual simengine::SimTime now() const = 0;
  // Pushes a half's queued segments onto the wire and arms its timer. Must
  // be called after driving a half outside packet-delivery context.
  virtual void activate(TcpHalf* half) = 0;
};

// One benchmark client issuing `request_count` sequential HTTP-style
// requests: connect, send a small request, read the response, and measure
// from connection start to the client's side of the teardown completing.
// A new connection per request; the next request starts as soon as the
// previous one finishes (or its connection dies).
class MiceSession {
 public:
  struct Params {
    uint32_t client_id = 0;
    uint32_t client_host = 0;
    uint32_t server_host = 0;
    uint32_t request_count = 0;
    uint64_t response_bytes = 0;
    uint32_t request_bytes = 0;
  };

  MiceSession(SessionEnv& env, Params params, std::vector<FctRecord>& sink)
      : env_(env), params_(params), sink_(sink) {}

  void start();
  bool finished() const {
    return started_ && next_idx_ >= params_.request_count;
  }
  uint32_t completed_requests() const { return next_idx_; }

 private:
  void begin_request();
  void finish_request(bool completed);

  SessionEnv& env_;
  Params params_;
  std::vector<FctRecord>& sink_;
  uint32_t next_idx_ = 0;
  bool started_ = false;
  bool in_flight_ = false;
  simengine::SimTime started_at_ = 0;
};

}  // namespace rwndqsim::endhost
