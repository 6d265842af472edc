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

#include "rwndqsim/wirecodec/tcp_segment.hpp"

#include <cstring>

#include "rwndqsim/wirecodec/checksum.hpp"

namespace rwndqsim::wirecodec {

namespace {

void put_be16(std::span<uint8_t> buf, size_t off, uint16_t v) {
  buf[off] = static_cast<uint8_t>(v >> 8);
  buf[off + 1] = static_cast<uint8_t>(v & 0xff);
}

void put_be32(std::span<uint8_t> buf, size_t off, uint32_t v) {
  buf[off] = static_cast<uint8_t>(v >> 24);
  buf[off + 1] = static_cast<uint8_t>(v >> 16);
  buf[off + 2] = static_cast<uint8_t>(v >> 8);
  buf[off + 3] = static_cast<uint8_t>(v & 0xff);
}

}  // namespace

std::string describe(const ParseError& err) {
  const char* what = "";
  switch (err.kind) {
    case ParseErrorKind::Truncated:
      what = "buffer truncated";
      break;
    case ParseErrorKind::BadIpVersion:
      what = "IP version is not 4";
      break;
    case ParseErrorKind::BadIpHeaderLength:
      what = "IP header length below minimum";
      break;
    case ParseErrorKind::NotTcp:
      what = "not TCP";
      break;
    case ParseErrorKind::BadTcpOffset:
      what = "TCP data offset below minimum";
      break;
    case ParseErrorKind::LengthMismatch:
      what = "IP total length cannot hold the headers";
      break;
  }
  return std::string(what) + " at offset " + std::to_string(err.offset);
}

void TcpSegmentView::rewrite_window(uint16_t new_window) {
  const size_t win_off = ip_hdr_len_ + 14;
  const size_t ck_off = ip_hdr_len_ + 16;
  const uint16_t old_window = be16(win_off);
  if (old_window == new_window) {
    return;
  }
  const uint16_t patched =
      incremental_checksum(be16(ck_off), old_window, new_window);
  buf_[win_off] = static_cast<uint8_t>(new_window >> 8);
  buf_[win_off + 1] = static_cast<uint8_t>(new_window & 0xff);
  buf_[ck_off] = static_cast<uint8_t>(patched >> 8);
  buf_[ck_off + 1] = static_cast<uint8_t>(patched & 0xff);
}

ParseResult parse_segment(std::span<uint8_t> buffer) {
  if (buffer.size() < 20) {
    return ParseError{ParseErrorKind::Truncated, buffer.size()};
  }
  if ((buffer[0] >> 4) != 4) {
    return ParseError{ParseErrorKind::BadIpVersion, 0};
  }
  const uint16_t ihl = static_cast<uint16_t>(buffer[0] & 0x0f) * 4;
  if (ihl < 20) {
    return ParseError{ParseErrorKind::BadIpHeaderLength, 0};
  }
  if (buffer.size() < ihl) {
    return ParseError{ParseErrorKind::Truncated, buffer.size()};
  }
  if (buffer[9] != 6) {
    return ParseError{ParseErrorKind::NotTcp, 9};
  }
  const uint16_t total_len =
      static_cast<uint16_t>((buffer[2] << 8) | buffer[3]);
  if (total_len < ihl + 20) {
    return ParseError{ParseErrorKind::LengthMismatch, 2};
  }
  if (buffer.size() < static_cast<size_t>(ihl) + 20) {
    return ParseError{ParseErrorKind::Truncated, buffer.size()};
  }
  const uint16_t doff = static_cast<uint16_t>(buffer[ihl + 12] >> 4) * 4;
  if (doff < 20) {
    return ParseError{ParseErrorKind::BadTcpOffset,
                      static_cast<size_t>(ihl) + 12};
  }
  if (total_len < ihl + doff) {
    return ParseError{ParseErrorKind::LengthMismatch, 2};
  }
  if (buffer.size() < static_cast<size_t>(ihl) + doff) {
    return ParseError{ParseErrorKind::Truncated, buffer.size()};
  }
  const uint32_t payload_len = static_cast<uint32_t>(total_len - ihl - doff);
  return TcpSegmentView(buffer, ihl, doff, payload_len);
}

size_t build_segment_into(const SegmentSpec& spec, std::span<uint8_t> out,
                          std::span<const uint8_t> payload) {
  const uint32_t payload_len =
      payload.empty() ? spec.payload_len : static_cast<uint32_t>(payload.size());
  const uint16_t total_len =
      static_cast<uint16_t>(kPlainHeaderBytes + payload_len);
  std::memset(out.data(), 0, kPlainHeaderBytes);

  // IPv4 header, 20 bytes, no options.
  out[0] = 0x45;
  put_be16(out, 2, total_len);
  put_be16(out, 4, spec.ip_id);
  out[8] = spec.ttl;
  out[9] = 6;  // TCP
  put_be32(out, 12, spec.src_ip);
  put_be32(out, 16, spec.dst_ip);
  put_be16(out, 10, ipv4_header_checksum(out.first(20)));

  // TCP header, 20 bytes, no options.
  put_be16(out, 20, spec.src_port);
  put_be16(out, 22, spec.dst_port);
  put_be32(out, 24, spec.seq);
  put_be32(out, 28, spec.ack_seq);
  out[32] = 5 << 4;  // data offset
  out[33] = spec.flags;
  put_be16(out, 34, spec.window);

  if (!payload.empty()) {
    std::memcpy(out.data() + kPlainHeaderBytes, payload.data(),
                payload.size());
  }
  const size_t written = kPlainHeaderBytes + payload.size();
  put_be16(out, 36, tcp_checksum_full(out.first(written)));
  return written;
}

std::vector<uint8_t> build_segment(const SegmentSpec& spec,
                                   std::span<const uint8_t> payload) {
  std::vector<uint8_t> buf(kPlainHeaderBytes + payload.size());
  build_segment_into(spec, buf, payload);
  return buf;
}

}  // namespace rwndqsim::wirecodec
