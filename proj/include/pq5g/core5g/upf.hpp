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

// User-plane function: terminates GTP-U tunnels from gNBs. A destination
// served locally hairpins back out with that session's downlink TEID; any
// other destination goes to the data network link when one exists. gNB-facing
// links carry raw GTP-U; the DN link carries raw inner packets.
class UpfNode final : public Node {
 public:
  UpfNode(std::string id, std::string smf_id, std::string dn_id = "")
      : Node(std::move(id)), smf_id_(std::move(smf_id)), dn_id_(std::move(dn_id)) {}

  size_t drops() const { return drops_; }
  size_t forwarded() const { return forwarded_; }
  const std::map<uint32_t, UpfRoute>& routes_by_ip() const { return by_ue_ip_; }

  void on_frame(const std::string& from, BytesView frame) override {
    if (from == smf_id_) {
      on_control(frame);
    } else if (!dn_id_.empty() && from == dn_id_) {
      auto inner = parse_inner(frame);
      if (!inner) {
        drops_++;
        return;
      }
      deliver_local(*inner, /*from_dn=*/true);
    } else {
      on_uplink(frame);
    }
  }

 private:
  void on_control(BytesView frame) {
    try {
      CtrlFrame msg = parse_ctrl_frame(frame);
      if (msg.type != CtrlType::kUpfRouteConfig) {
        drops_++;
        return;
      }
      UpfRoute route = parse_upf_route(msg.body);
      by_uplink_teid_[route.uplink_teid] = route;
      by_ue_ip_[route.ue_ip] = route;
    } catch (const ParseError&) {
      drops_++;
    }
  }

  void on_uplink(BytesView frame) {
    auto gtp = gtpu_decap(frame);
    if (!gtp) {
      drops_++;
      return;
    }
    if (!by_uplink_teid_.count(gtp->teid)) {
      drops_++;
      return;
    }
    auto inner = parse_inner(gtp->inner);
    if (!inner) {
      drops_++;
      return;
    }
    deliver_local(*inner, /*from_dn=*/false);
  }

  void deliver_local(const InnerPacket& inner, bool from_dn) {
    auto dst = by_ue_ip_.find(inner.dst_ip);
    if (dst != by_ue_ip_.end()) {
      forwarded_++;
      send(dst->second.gnb_id,
           gtpu_encap(dst->second.downlink_teid, pack_inner(inner)));
      return;
    }
    if (!from_dn && !dn_id_.empty()) {
      forwarded_++;
      send(dn_id_, pack_inner(inner));
      return;
    }
    drops_++;  // unknown destination
  }

  std::string smf_id_;
  std::string dn_id_;
  std::map<uint32_t, UpfRoute> by_uplink_teid_;
  std::map<uint32_t, UpfRoute> by_ue_ip_;
  size_t drops_ = 0;
  size_t forwarded_ = 0;
};

// Data network: relays inner packets between the UPFs attached to it.
class DnNode final : public Node {
 public:
  explicit DnNode(std::string id, std::vector<std::string> upf_ids)
      : Node(std::move(id)), upf_ids_(std::move(upf_ids)) {}

  size_t relays() const { return relays_; }

  void on_frame(const std::string& from, BytesView frame) override {
    for (const auto& upf : upf_ids_) {
      if (upf == from) continue;
      relays_++;
      send(upf, Bytes(frame.begin(), frame.end()));
    }
  }

 private:
  std::vector<std::string> upf_ids_;
  size_t relays_ = 0;
};

}  // namespace pq5g::core5g
