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
#include <string>
#include <vector>

namespace rwndqsim::wirecodec {

inline constexpr uint32_t kPcapMagic = 0xa1b2c3d4;
inline constexpr uint32_t kLinktypeRawIp = 101;  // packets start at the IP header

struct PcapRecord {
  uint32_t ts_sec = 0;
  uint32_t ts_usec = 0;
  std::vector<uint8_t> data;
};

// Classic pcap file (magic 0xa1b2c3d4, version 2.4), native byte order.
void write_pcap(const std::string& path, std::span<const PcapRecord> records,
                uint32_t linktype = kLinktypeRawIp);

// Throws std::runtime_error on I/O failure, bad magic or a truncated record.
std::vector<PcapRecord> read_pcap(const std::string& path);

}  // namespace rwndqsim::wirecodec
