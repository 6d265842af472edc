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

#include "rwndqsim/wirecodec/pcap.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rwndqsim::wirecodec {

namespace {

struct FileHeader {
  uint32_t magic;
  uint16_t version_major;
  uint16_t version_minor;
  int32_t thiszone;
  uint32_t sigfigs;
  uint32_t snaplen;
  uint32_t network;
};

struct RecordHeader {
  uint32_t ts_sec;
  uint32_t ts_usec;
  uint32_t incl_len;
  uint32_t orig_len;
};

}  // namespace

void write_pcap(const std::string& path, std::span<const PcapRecord> records,
                uint32_t linktype) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("pcap: cannot open " + path + " for writing");
  }
  FileHeader fh{kPcapMagic, 2, 4, 0, 0, 65535, linktype};
  out.write(reinterpret_cast<const char*>(&fh), sizeof fh);
  for (const auto& rec : records) {
    RecordHeader rh{rec.ts_sec, rec.ts_usec,
                    static_cast<uint32_t>(rec.data.size()),
                    static_cast<uint32_t>(rec.data.size())};
    out.write(reinterpret_cast<const char*>(&rh), sizeof rh);
    out.write(reinterpret_cast<const char*>(rec.data.data()),
              static_cast<std::streamsize>(rec.data.size()));
  }
  if (!out) {
    throw std::runtime_error("pcap: short write to " + path);
  }
}

std::vector<PcapRecord> read_pcap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("pcap: cannot open " + path);
  }
  FileHeader fh{};
  in.read(reinterpret_cast<char*>(&fh), sizeof fh);
  if (!in || fh.magic != kPcapMagic) {
    throw std::runtime_error("pcap: bad magic in " + path);
  }
  std::vector<PcapRecord> records;
  for (;;) {
    RecordHeader rh{};
    in.read(reinterpret_cast<char*>(&rh), sizeof rh);
    if (in.eof() && in.gcount() == 0) {
      break;
    }
    if (!in || in.gcount() != sizeof rh) {
      throw std::runtime_error("pcap: truncated record header in " + path);
    }
    PcapRecord rec;
    rec.ts_sec = rh.ts_sec;
    rec.ts_usec = rh.ts_usec;
    rec.data.resize(rh.incl_len);
    in.read(reinterpret_cast<char*>(rec.data.data()), rh.incl_len);
    if (!in || in.gcount() != static_cast<std::streamsize>(rh.incl_len)) {
      throw std::runtime_error("pcap: truncated record body in " + path);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace rwndqsim::wirecodec
