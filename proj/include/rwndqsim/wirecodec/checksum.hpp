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
#include <span>

namespace rwndqsim::wirecodec {

// One's-complement accumulation over big-endian 16-bit words. An odd
// trailing byte is padded with a zero on the right, per RFC 1071.
uint32_t ones_complement_add(uint32_t sum, std::span<const uint8_t> data);

// Fold a 32-bit accumulator down to 16 bits with end-around carry.
uint16_t ones_complement_fold(uint32_t sum);

// Incremental checksum update for replacing one 16-bit-aligned field:
// HC' = ~(~HC + ~m + m'), the same rule the kernel's csum_replace2 applies.
// Arguments and result are field contents read as big-endian uint16.
uint16_t incremental_checksum(uint16_t old_checksum, uint16_t old_field,
                              uint16_t new_field);

// Full TCP checksum (pseudo-header + TCP header + payload) for an IPv4
// datagram starting at the IP header. Payload bytes missing from the buffer
// are treated as zero: the simulator never materializes payload, and zero
// words do not change a one's-complement sum, so the value is identical to
// a checksum over a real all-zero payload of the declared length.
// The checksum field itself is excluded from the sum. Returns the value the
// TCP checksum field must hold for the segment to verify.
uint16_t tcp_checksum_full(std::span<const uint8_t> datagram);

// IPv4 header checksum with the stored checksum field treated as zero.
uint16_t ipv4_header_checksum(std::span<const uint8_t> ip_header);

}  // namespace rwndqsim::wirecodec
