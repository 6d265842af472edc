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
#include <variant>
#include <vector>

namespace rwndqsim::wirecodec {

// TCP flag bits as stored in the header's 13th byte.
inline constexpr uint8_t kFlagFin = 0x01;
inline constexpr uint8_t kFlagSyn = 0x02;
inline constexpr uint8_t kFlagRst = 0x04;
inline constexpr uint8_t kFlagAck = 0x10;

enum class ParseErrorKind : uint8_t {
  Truncated,          // buffer ends before the header does
  BadIpVersion,       // version nibble is not 4
  BadIpHeaderLength,  // IHL below 5 words
  NotTcp,             // IP protocol is not 6
  BadTcpOffset,       // TCP data offset below 5 words
  LengthMismatch,     // IP total length cannot hold the headers
};

struct ParseError {
  ParseErrorKind kind;
  size_t offset;  // byte offset of the offending field (or first missing byte)
};

std::string describe(const ParseError& err);

// Zero-copy view over an IPv4+TCP datagram owned by the caller. Accessors
// read through to the buffer, so mutations are immediately visible.
// Obtain instances via parse_segment(); the constructor trusts its inputs.
class TcpSegmentView {
 public:
  TcpSegmentView(std::span<uint8_t> buf, uint16_t ip_hdr_len,
                 uint16_t tcp_hdr_len, uint32_t payload_len)
      : buf_(buf),
        ip_hdr_len_(ip_hdr_len),
        tcp_hdr_len_(tcp_hdr_len),
        payload_len_(payload_len) {}

  uint32_t src_ip() const { return be32(12); }
  uint32_t dst_ip() const { return be32(16); }
  uint16_t src_port() const { return be16(ip_hdr_len_ + 0); }
  uint16_t dst_port() const { return be16(ip_hdr_len_ + 2); }
  uint32_t seq() const { return be32(ip_hdr_len_ + 4); }
  uint32_t ack_seq() const { return be32(ip_hdr_len_ + 8); }

  uint8_t flags() const { return buf_[ip_hdr_len_ + 13]; }
  bool syn() const { return flags() & kFlagSyn; }
  bool ack() const { return flags() & kFlagAck; }
  bool fin() const { return flags() & kFlagFin; }
  bool rst() const { return flags() & kFlagRst; }

  uint16_t window() const { return be16(ip_hdr_len_ + 14); }
  uint16_t checksum() const { return be16(ip_hdr_len_ + 16); }

  uint32_t payload_len() const { return payload_len_; }
  size_t header_offset() const { return ip_hdr_len_; }
  size_t tcp_header_len() const { return tcp_hdr_len_; }

  // Replaces the 16-bit receive-window field and patches the TCP checksum
  // incrementally. No other byte of the buffer changes.
  void rewrite_window(uint16_t new_window);

  std::span<const uint8_t> bytes() const { return buf_; }

 private:
  uint16_t be16(size_t off) const {
    return static_cast<uint16_t>((buf_[off] << 8) | buf_[off + 1]);
  }
  uint32_t be32(size_t off) const {
    return (static_cast<uint32_t>(buf_[off]) << 24) |
           (static_cast<uint32_t>(buf_[off + 1]) << 16) |
           (static_cast<uint32_t>(buf_[off + 2]) << 8) | buf_[off + 3];
  }

  std::span<uint8_t> buf_;
  uint16_t ip_hdr_len_;
  uint16_t tcp_hdr_len_;
  uint32_t payload_len_;
};

using ParseResult = std::variant<TcpSegmentView, ParseError>;

// Parses an IPv4+TCP datagram. The buffer must contain at least the full
// headers; payload bytes may be absent (the IP total length is authoritative
// for the payload size). Does not copy or mutate.
ParseResult parse_segment(std::span<uint8_t> buffer);

inline bool parse_ok(const ParseResult& r) {
  return std::holds_alternative<TcpSegmentView>(r);
}

// Field values for constructing a segment. payload_len is taken at face
// value when no payload bytes are supplied (the simulator's virtual payload).
struct SegmentSpec {
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint32_t seq = 0;
  uint32_t ack_seq = 0;
  uint8_t flags = 0;
  uint16_t window = 0;
  uint32_t payload_len = 0;
  uint16_t ip_id = 0;
  uint8_t ttl = 64;
};

inline constexpr size_t kPlainHeaderBytes = 40;  // 20B IPv4 + 20B TCP, no options

// Writes a plain 40-byte header (plus payload, if given) with valid IP and
// TCP checksums. `out` must hold kPlainHeaderBytes + payload.size().
// Returns the number of bytes written.
size_t build_segment_into(const SegmentSpec& spec, std::span<uint8_t> out,
                          std::span<const uint8_t> payload = {});

std::vector<uint8_t> build_segment(const SegmentSpec& spec,
                                   std::span<const uint8_t> payload = {});

}  // namespace rwndqsim::wirecodec
