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

#include <string>

#include "pq5g/bytes.hpp"

namespace pq5g::core5g {

// Control-plane message types. Control frames use the same
// type(1) || len(3, big-endian) || body framing as handshake messages.
enum class CtrlType : uint8_t {
  kRegistrationRequest = 0x10,
  kRegistrationChallenge = 0x11,
  kRegistrationResponse = 0x12,
  kRegistrationAccept = 0x13,
  kRegistrationReject = 0x14,
  kSessionRequest = 0x15,
  kSessionAccept = 0x16,
  kSessionReject = 0x17,
  kSmfSessionRequest = 0x18,
  kSmfSessionAccept = 0x19,
  kSmfSessionReject = 0x1a,
  kUpfRouteConfig = 0x1b,
  kGnbSessionConfig = 0x1c,
  kUserData = 0x1f,
};

inline constexpr size_t kNonceLen = 16;
inline constexpr size_t kMacLen = 32;

inline Bytes ctrl_frame(CtrlType type, BytesView body) {
  if (body.size() > 0xffffff)
    throw std::invalid_argument("control message too long");
  Bytes out;
  out.push_back(static_cast<uint8_t>(type));
  append_u24be(out, static_cast<uint32_t>(body.size()));
  append(out, body);
  return out;
}

struct CtrlFrame {
  CtrlType type;
  BytesView body;
};

inline CtrlFrame parse_ctrl_frame(BytesView framed) {
  ByteReader r(framed);
  uint8_t t = r.u8();
  if (t < 0x10 || (t > 0x1c && t != 0x1f))
    throw ParseError("unknown control message type");
  size_t len = r.u24be();
  BytesView body = r.take(len);
  r.expect_end();
  return CtrlFrame{static_cast<CtrlType>(t), body};
}

inline void append_string8(Bytes& out, const std::string& s) {
  if (s.size() > 0xff) throw std::invalid_argument("string field too long");
  out.push_back(static_cast<uint8_t>(s.size()));
  append(out, to_bytes(s));
}

inline std::string read_string8(ByteReader& r) {
  size_t len = r.u8();
  return to_string(r.take(len));
}

// Every UE-originated or UE-bound control body starts with the supi, which
// is what the gNB keys its relay table on.
inline Bytes supi_body(const std::string& supi) {
  Bytes out;
  append_string8(out, supi);
  return out;
}

inline std::string peek_supi(BytesView body) {
  ByteReader r(body);
  return read_string8(r);
}

inline Bytes supi_cause_body(const std::string& supi, const std::string& cause) {
  Bytes out;
  append_string8(out, supi);
  append_string8(out, cause);
  return out;
}

struct SessionGrant {
  std::string supi;
  uint32_t ue_ip = 0;
  uint32_t session_id = 0;
  uint32_t uplink_teid = 0;
  uint32_t downlink_teid = 0;
  std::string upf_id;
};

inline Bytes serialize_session_grant(const SessionGrant& g) {
  Bytes out;
  append_string8(out, g.supi);
  append_u32be(out, g.ue_ip);
  append_u32be(out, g.session_id);
  append_u32be(out, g.uplink_teid);
  append_u32be(out, g.downlink_teid);
  append_string8(out, g.upf_id);
  return out;
}

inline SessionGrant parse_session_grant(BytesView body) {
  ByteReader r(body);
  SessionGrant g;
  g.supi = read_string8(r);
  g.ue_ip = r.u32be();
  g.session_id = r.u32be();
  g.uplink_teid = r.u32be();
  g.downlink_teid = r.u32be();
  g.upf_id = read_string8(r);
  r.expect_end();
  return g;
}

struct UpfRoute {
  uint32_t ue_ip = 0;
  uint32_t uplink_teid = 0;
  uint32_t downlink_teid = 0;
  std::string gnb_id;
};

inline Bytes serialize_upf_route(const UpfRoute& route) {
  Bytes out;
  append_u32be(out, route.ue_ip);
  append_u32be(out, route.uplink_teid);
  append_u32be(out, route.downlink_teid);
  append_string8(out, route.gnb_id);
  return out;
}

inline UpfRoute parse_upf_route(BytesView body) {
  ByteReader r(body);
  UpfRoute route;
  route.ue_ip = r.u32be();
  route.uplink_teid = r.u32be();
  route.downlink_teid = r.u32be();
  route.gnb_id = read_string8(r);
  r.expect_end();
  return route;
}

}  // namespace pq5g::core5g
