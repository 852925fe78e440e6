// Copyright 2026 The pq5g Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>

#include "pq5g/bytes.hpp"

namespace pq5g::core5g {

// Simulator inner user-plane packet. Deliberately not an IP header:
// src_ip(4) || dst_ip(4) || len(2, big-endian) || payload.
struct InnerPacket {
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  Bytes payload;

  bool operator==(const InnerPacket&) const = default;
};

inline constexpr size_t kInnerHeaderLen = 10;

inline Bytes pack_inner(const InnerPacket& p) {
  if (p.payload.size() > 0xffff)
    throw std::invalid_argument("pack_inner: payload too long");
  Bytes out;
  out.reserve(kInnerHeaderLen + p.payload.size());
  append_u32be(out, p.src_ip);
  append_u32be(out, p.dst_ip);
  append_u16be(out, static_cast<uint16_t>(p.payload.size()));
  append(out, p.payload);
  return out;
}

inline std::optional<InnerPacket> parse_inner(BytesView frame) {
  if (frame.size() < kInnerHeaderLen) return std::nullopt;
  uint16_t len = read_u16be(frame, 8);
  if (frame.size() - kInnerHeaderLen != len) return std::nullopt;
  InnerPacket p;
  p.src_ip = read_u32be(frame, 0);
  p.dst_ip = read_u32be(frame, 4);
  BytesView payload = frame.subspan(kInnerHeaderLen);
  p.payload.assign(payload.begin(), payload.end());
  return p;
}

inline std::string format_ipv4(uint32_t ip) {
  return std::to_string(ip >> 24) + "." + std::to_string(ip >> 16 & 0xff) + "." +
         std::to_string(ip >> 8 & 0xff) + "." + std::to_string(ip & 0xff);
}

inline std::optional<uint32_t> parse_ipv4(const std::string& text) {
  uint32_t ip = 0;
  size_t pos = 0;
  for (int part = 0; part < 4; part++) {
    if (pos >= text.size()) return std::nullopt;
    size_t end = pos;
    uint32_t value = 0;
    while (end < text.size() && text[end] >= '0' && text[end] <= '9') {
      value = value * 10 + static_cast<uint32_t>(text[end] - '0');
      if (value > 255) return std::nullopt;
      end++;
    }
    if (end == pos) return std::nullopt;
    ip = ip << 8 | value;
    pos = end;
    if (part < 3) {
      if (pos >= text.size() || text[pos] != '.') return std::nullopt;
      pos++;
    }
  }
  if (pos != text.size()) return std::nullopt;
  return ip;
}

// "a.b.c.d/len" -> (base address, prefix length)
inline std::optional<std::pair<uint32_t, int>> parse_ipv4_prefix(
    const std::string& text) {
  size_t slash = text.find('/');
  if (slash == std::string::npos) return std::nullopt;
  auto base = parse_ipv4(text.substr(0, slash));
  if (!base) return std::nullopt;
  int len = 0;
  try {
    size_t used = 0;
    len = std::stoi(text.substr(slash + 1), &used);
    if (used != text.size() - slash - 1) return std::nullopt;
  } catch (...) {
    return std::nullopt;
  }
  if (len < 8 || len > 30) return std::nullopt;
  uint32_t mask = len == 0 ? 0 : ~uint32_t{0} << (32 - len);
  if ((*base & ~mask) != 0) return std::nullopt;
  return std::make_pair(*base, len);
}

}  // namespace pq5g::core5g
