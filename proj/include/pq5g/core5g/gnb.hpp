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

#include <map>
#include <string>

#include "pq5g/core5g/control.hpp"
#include "pq5g/core5g/gtpu.hpp"
#include "pq5g/core5g/network.hpp"
#include "pq5g/core5g/packet.hpp"

namespace pq5g::core5g {

// Radio access node: relays control traffic between UEs and the AMF, and
// converts user traffic between the UE-facing framing and GTP-U tunnels on
// the UPF side. The UE-facing link carries framed control messages; the
// UPF-facing link carries raw GTP-U frames only.
class GnbNode final : public Node {
 public:
  GnbNode(std::string id, std::string amf_id, std::string upf_id)
      : Node(std::move(id)), amf_id_(std::move(amf_id)), upf_id_(std::move(upf_id)) {}

  size_t relays() const { return relays_; }
  size_t drops() const { return drops_; }

  void on_frame(const std::string& from, BytesView frame) override {
    if (from == upf_id_) {
      on_downlink(frame);
      return;
    }
    CtrlFrame msg;
    try {
      msg = parse_ctrl_frame(frame);
    } catch (const ParseError&) {
      drops_++;
      return;
    }
    try {
      if (from == amf_id_) {
        on_from_amf(msg);
      } else {
        on_from_ue(from, msg);
      }
    } catch (const ParseError&) {
      drops_++;
    }
  }

 private:
  struct Session {
    uint32_t uplink_teid;
    std::string supi;
  };

  void on_downlink(BytesView frame) {
    auto gtp = gtpu_decap(frame);
    if (!gtp) {
      drops_++;
      return;
    }
    auto it = downlink_.find(gtp->teid);
    if (it == downlink_.end()) {
      drops_++;
      return;
    }
    auto ue = ue_link_.find(it->second);
    if (ue == ue_link_.end()) {
      drops_++;
      return;
    }
    relays_++;
    send(ue->second, ctrl_frame(CtrlType::kUserData, gtp->inner));
  }

  void on_from_amf(const CtrlFrame& msg) {
    if (msg.type == CtrlType::kGnbSessionConfig) {
      SessionGrant grant = parse_session_grant(msg.body);
      uplink_[grant.ue_ip] = Session{grant.uplink_teid, grant.supi};
      downlink_[grant.downlink_teid] = grant.supi;
      return;
    }
    // UE-bound control: route by the supi that leads every body.
    std::string supi = peek_supi(msg.body);
    auto ue = ue_link_.find(supi);
    if (ue == ue_link_.end()) {
      drops_++;
      return;
    }
    relays_++;
    send(ue->second, ctrl_frame(msg.type, msg.body));
  }

  void on_from_ue(const std::string& from, const CtrlFrame& msg) {
    if (msg.type == CtrlType::kUserData) {
      auto inner = parse_inner(msg.body);
      if (!inner) {
        drops_++;
        return;
      }
      auto session = uplink_.find(inner->src_ip);
      if (session == uplink_.end()) {
        drops_++;
        return;
      }
      relays_++;
      send(upf_id_, gtpu_encap(session->second.uplink_teid, msg.body));
      return;
    }
    ue_link_[peek_supi(msg.body)] = from;
    relays_++;
    send(amf_id_, ctrl_frame(msg.type, msg.body));
  }

  std::string amf_id_;
  std::string upf_id_;
  std::map<std::string, std::string> ue_link_;    // supi -> UE node id
  std::map<uint32_t, Session> uplink_;            // ue_ip -> session
  std::map<uint32_t, std::string> downlink_;      // downlink TEID -> supi
  size_t relays_ = 0;
  size_t drops_ = 0;
};

}  // namespace pq5g::core5g
