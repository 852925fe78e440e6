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
#include "pq5g/core5g/network.hpp"
#include "pq5g/core5g/packet.hpp"

namespace pq5g::core5g {

// Session management function: allocates UE addresses from the pool and
// TEIDs from a per-UPF monotonic counter, then pushes the forwarding rule to
// the session's UPF before confirming toward the AMF.
class SmfNode final : public Node {
 public:
  SmfNode(std::string id, std::string amf_id, const std::string& ip_pool,
          std::map<std::string, std::string> gnb_to_upf)
      : Node(std::move(id)),
        amf_id_(std::move(amf_id)),
        gnb_to_upf_(std::move(gnb_to_upf)) {
    auto pool = parse_ipv4_prefix(ip_pool);
    if (!pool) throw std::invalid_argument("bad ip_pool prefix: " + ip_pool);
    pool_base_ = pool->first;
    pool_capacity_ = (uint64_t{1} << (32 - pool->second)) - 2;
  }

  const std::map<std::string, SessionGrant>& sessions() const { return sessions_; }

  void on_frame(const std::string& from, BytesView frame) override {
    (void)from;
    CtrlFrame msg;
    try {
      msg = parse_ctrl_frame(frame);
    } catch (const ParseError&) {
      drops_++;
      return;
    }
    if (msg.type != CtrlType::kSmfSessionRequest) {
      drops_++;
      return;
    }
    try {
      ByteReader r(msg.body);
      std::string supi = read_string8(r);
      std::string dnn = read_string8(r);
      std::string gnb_id = read_string8(r);
      r.expect_end();
      establish(supi, dnn, gnb_id);
    } catch (const ParseError&) {
      drops_++;
    }
  }

  size_t drops() const { return drops_; }

 private:
  void establish(const std::string& supi, const std::string& dnn,
                 const std::string& gnb_id) {
    (void)dnn;  // the DNN is a label in this simulator; routing is topological
    if (sessions_.count(supi)) {
      reject(supi, "session_already_active");
      return;
    }
    auto upf_it = gnb_to_upf_.find(gnb_id);
    if (upf_it == gnb_to_upf_.end()) {
      reject(supi, "no_upf_for_gnb");
      return;
    }
    if (next_host_ >= pool_capacity_) {
      reject(supi, "resource_unavailable");
      return;
    }
    SessionGrant grant;
    grant.supi = supi;
    // .1 is reserved for the UPF gateway; UE addresses start at .2.
    grant.ue_ip = pool_base_ + static_cast<uint32_t>(next_host_++) + 1;
    grant.session_id = next_session_id_++;
    uint32_t& teid = next_teid_[upf_it->second];
    if (teid == 0) teid = 1;
    grant.uplink_teid = teid++;
    grant.downlink_teid = teid++;
    grant.upf_id = upf_it->second;
    sessions_[supi] = grant;

    UpfRoute route{grant.ue_ip, grant.uplink_teid, grant.downlink_teid, gnb_id};
    send(grant.upf_id, ctrl_frame(CtrlType::kUpfRouteConfig, serialize_upf_route(route)));
    send(amf_id_, ctrl_frame(CtrlType::kSmfSessionAccept, serialize_session_grant(grant)));
  }

  void reject(const std::string& supi, const std::string& cause) {
    send(amf_id_, ctrl_frame(CtrlType::kSmfSessionReject, supi_cause_body(supi, cause)));
  }

  std::string amf_id_;
  std::map<std::string, std::string> gnb_to_upf_;
  uint32_t pool_base_ = 0;
  uint64_t pool_capacity_ = 0;
  uint64_t next_host_ = 1;  // offset over the reserved gateway address
  uint32_t next_session_id_ = 1;
  std::map<std::string, uint32_t> next_teid_;
  std::map<std::string, SessionGrant> sessions_;
  size_t drops_ = 0;
};

}  // namespace pq5g::core5g
