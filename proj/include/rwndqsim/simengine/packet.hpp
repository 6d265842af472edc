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

#include <array>
#include <cstdint>
#include <span>

namespace rwndqsim::simengine {

// A packet in flight: real header bytes plus a counted-but-not-materialized
// payload. Queues, links and checksum arithmetic all see the true wire size;
// only the payload contents are virtual (all-zero by definition).
struct Packet {
  static constexpr size_t kHeaderCapacity = 60;

  std::array<uint8_t, kHeaderCapacity> header{};
  uint8_t header_len = 0;
  uint32_t payload_len = 0;
  uint64_t uid = 0;

  uint32_t wire_size() const { return header_len + payload_len; }
  std::span<uint8_t> header_bytes() { return {header.data(), header_len}; }
  std::span<const uint8_t> header_bytes() const {
    return {header.data(), header_len};
  }
};

}  // namespace rwndqsim::simengine
