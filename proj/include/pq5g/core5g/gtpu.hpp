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

#include "pq5g/bytes.hpp"

namespace pq5g::core5g {

// G-PDU header: version=1, PT=1, E=S=PN=0. Extension headers, sequence
// numbers and echo messages are out of scope; the flags byte is constant.
inline constexpr uint8_t kGtpuFlags = 0x30;
inline constexpr uint8_t kGtpuMsgTypeGpdu = 0xff;
inline constexpr size_t kGtpuHeaderLen = 8;
inline constexpr uint16_t kGtpuPort = 2152;

struct GtpuPacket {
  uint32_t teid;
  Bytes inner;

  bool operator==(const GtpuPacket&) const = default;
};

// flags(1) || msg_type(1) || length(2, big-endian) || teid(4, big-endian)
inline Bytes gtpu_encap(uint32_t teid, BytesView inner) {
  if (inner.size() > 0xffff)
    throw std::invalid_argument("gtpu_encap: payload too long");
  Bytes out;
  out.reserve(kGtpuHeaderLen + inner.size());
  out.push_back(kGtpuFlags);
  out.push_back(kGtpuMsgTypeGpdu);
  append_u16be(out, static_cast<uint16_t>(inner.size()));
  append_u32be(out, teid);
  append(out, inner);
  return out;
}

// Exact inverse of gtpu_encap. nullopt on a short frame, wrong version,
// wrong message type, or a length field that disagrees with the frame.
inline std::optional<GtpuPacket> gtpu_decap(BytesView frame) {
  if (frame.size() < kGtpuHeaderLen) return std::nullopt;
  if (frame[0] != kGtpuFlags) return std::nullopt;
  if (frame[1] != kGtpuMsgTypeGpdu) return std::nullopt;
  uint16_t len = read_u16be(frame, 2);
  if (frame.size() - kGtpuHeaderLen != len) return std::nullopt;
  GtpuPacket p;
  p.teid = read_u32be(frame, 4);
  BytesView inner = frame.subspan(kGtpuHeaderLen);
  p.inner.assign(inner.begin(), inner.end());
  return p;
}

}  // namespace pq5g::core5g
