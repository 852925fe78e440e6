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
#include "pq5g/core5g/topology.hpp"
#include "pq5g/crypto/sha256.hpp"
#include "pq5g/rng.hpp"

namespace pq5g::core5g {

enum class RegState { kDeregistered, kChallenged, kRegistered };

// Access and mobility function: owns the subscriber registry, runs the
// nonce/HMAC registration challenge, and gates session requests on
// registration state before involving the SMF.
class AmfNode final : public Node {
 public:
  AmfNode(std::string id, std::string smf_id,
          const std::vector<SubscriberRecord>& subscribers, RandomSource& rng)
      : Node(std::move(id)), smf_id_(std::move(smf_id)), rng_(&rng) {
    for (const auto& s : subscribers) registry_[s.supi] = Entry{s, RegState::kDeregistered, {}, {}};
  }

  RegState reg_state(const std::string& supi) const {
    auto it = registry_.find(supi);
    return it == registry_.end() ? RegState::kDeregistered : it->second.state;
  }

  void on_frame(const std::string& from, BytesView frame) override {
    CtrlFrame msg;
    try {
      msg = parse_ctrl_frame(frame);
    } catch (const ParseError&) {
      drops_++;
      return;
    }
    try {
      handle(from, msg);
    } catch (const ParseError&) {
      drops_++;
    }
  }

  size_t drops() const { return drops_; }

 private:
  struct Entry {
    SubscriberRecord record;
    RegState state = RegState::kDeregistered;
    Bytes nonce;
    std::string serving_gnb;
  };

  void handle(const std::string& from, const CtrlFrame& msg) {
    switch (msg.type) {
      case CtrlType::kRegistrationRequest: {
        ByteReader r(msg.body);
        std::string supi = read_string8(r);
        r.expect_end();
        auto it = registry_.find(supi);
        if (it == registry_.end() || !it->second.record.allowed) {
          send(from, ctrl_frame(CtrlType::kRegistrationReject,
                                supi_cause_body(supi, "unknown_subscriber")));
          return;
        }
        it->second.nonce = rng_->bytes(kNonceLen);
        it->second.state = RegState::kChallenged;
        it->second.serving_gnb = from;
        Bytes body = supi_body(supi);
        append(body, it->second.nonce);
        send(from, ctrl_frame(CtrlType::kRegistrationChallenge, body));
        return;
      }
      case CtrlType::kRegistrationResponse: {
        ByteReader r(msg.body);
        std::string supi = read_string8(r);
        auto mac = r.take(kMacLen);
        r.expect_end();
        auto it = registry_.find(supi);
        if (it == registry_.end() || it->second.state != RegState::kChallenged) {
          send(from, ctrl_frame(CtrlType::kRegistrationReject,
                                supi_cause_body(supi, "no_pending_challenge")));
          return;
        }
        auto expected = crypto::hmac_sha256(view(it->second.record.k),
                                            view(it->second.nonce));
        if (!ct_equal(view(expected), mac)) {
          it->second.state = RegState::kDeregistered;
          send(from, ctrl_frame(CtrlType::kRegistrationReject,
                                supi_cause_body(supi, "auth_failure")));
          return;
        }
        it->second.state = RegState::kRegistered;
        it->second.serving_gnb = from;
        send(from, ctrl_frame(CtrlType::kRegistrationAccept, supi_body(supi)));
        return;
      }
      case CtrlType::kSessionRequest: {
        ByteReader r(msg.body);
        std::string supi = read_string8(r);
        std::string dnn = read_string8(r);
        r.expect_end();
        auto it = registry_.find(supi);
        if (it == registry_.end() || it->second.state != RegState::kRegistered) {
          send(from, ctrl_frame(CtrlType::kSessionReject,
                                supi_cause_body(supi, "not_registered")));
          return;
        }
        Bytes body;
        append_string8(body, supi);
        append_string8(body, dnn);
        append_string8(body, from);  // serving gNB, needed for UPF selection
        send(smf_id_, ctrl_frame(CtrlType::kSmfSessionRequest, body));
        return;
      }
      case CtrlType::kSmfSessionAccept: {
        SessionGrant grant = parse_session_grant(msg.body);
        auto it = registry_.find(grant.supi);
        if (it == registry_.end()) {
          drops_++;
          return;
        }
        const std::string& gnb = it->second.serving_gnb;
        // Session config first, then the UE-bound accept: FIFO delivery
        // means the gNB has the tunnel installed before the UE can send.
        send(gnb, ctrl_frame(CtrlType::kGnbSessionConfig, msg.body));
        send(gnb, ctrl_frame(CtrlType::kSessionAccept, msg.body));
        return;
      }
      case CtrlType::kSmfSessionReject: {
        ByteReader r(msg.body);
        std::string supi = read_string8(r);
        std::string cause = read_string8(r);
        r.expect_end();
        auto it = registry_.find(supi);
        if (it == registry_.end()) {
          drops_++;
          return;
        }
        send(it->second.serving_gnb,
             ctrl_frame(CtrlType::kSessionReject, supi_cause_body(supi, cause)));
        return;
      }
      default:
        drops_++;
        return;
    }
  }

  std::string smf_id_;
  RandomSource* rng_;
  std::map<std::string, Entry> registry_;
  size_t drops_ = 0;
};

}  // namespace pq5g::core5g
