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

#include "rwndqsim/wirecodec/checksum.hpp"

namespace rwndqsim::wirecodec {

uint32_t ones_complement_add(uint32_t sum, std::span<const uint8_t> data) {
  size_t i = 0;
  for (; i + 1 < data.size(); i += 2) {
    sum += (static_cast<uint32_t>(data[i]) << 8) | data[i + 1];
  }
  if (i < data.size()) {
    sum += static_cast<uint32_t>(data[i]) << 8;
  }
  return sum;
}

uint16_t ones_complement_fold(uint32_t sum) {
  while (sum >> 16) {
    sum = (sum & 0xffffu) + (sum >> 16);
  }
  return static_cast<uint16_t>(sum);
}

uint16_t incremental_checksum(uint16_t old_checksum, uint16_t old_field,
                              uint16_t new_field) {
  uint32_t sum = static_cast<uint16_t>(~old_checksum);
  sum += static_cast<uint16_t>(~old_field);
  sum += new_field;
  return static_cast<uint16_t>(~ones_complement_fold(sum));
}

uint16_t tcp_checksum_full(std::span<const uint8_t> datagram) {
  const uint8_t ihl = (datagram[0] & 0x0f) * 4;
  const uint16_t total_len =
      (static_cast<uint16_t>(datagram[2]) << 8) | datagram[3];
  const uint16_t tcp_len = total_len - ihl;

  // Pseudo-header: source, destination, protocol, TCP length.
  uint32_t sum = 0;
  sum = ones_complement_add(sum, datagram.subspan(12, 8));
  sum += datagram[9];  // protocol
  sum += tcp_len;

  // TCP header + whatever payload bytes are present, checksum field zeroed.
  const size_t tcp_off = ihl;
  const size_t avail = datagram.size() > tcp_off + static_cast<size_t>(tcp_len)
                           ? tcp_off + tcp_len
                           : datagram.size();
  size_t i = tcp_off;
  for (; i + 1 < avail; i += 2) {
    if (i == tcp_off + 16) {
      continue;  // stored checksum
    }
    sum += (static_cast<uint32_t>(datagram[i]) << 8) | datagram[i + 1];
  }
  if (i < avail) {
    sum += static_cast<uint32_t>(datagram[i]) << 8;
  }
  return static_cast<uint16_t>(~ones_complement_fold(sum));
}

uint16_t ipv4_header_checksum(std::span<const uint8_t> ip_header) {
  const uint8_t ihl = (ip_header[0] & 0x0f) * 4;
  uint32_t sum = 0;
  for (size_t i = 0; i + 1 < ihl; i += 2) {
    if (i == 10) {
      continue;  // stored checksum
    }
    sum += (static_cast<uint32_t>(ip_header[i]) << 8) | ip_header[i + 1];
  }
  return static_cast<uint16_t>(~ones_complement_fold(sum));
}

}  // namespace rwndqsim::wirecodec
