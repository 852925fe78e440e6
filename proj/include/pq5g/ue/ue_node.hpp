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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pq5g/bytes.hpp"
#include "pq5g/core5g/control.hpp"
#include "pq5g/core5g/network.hpp"
#include "pq5g/core5g/packet.hpp"
#include "pq5g/crypto/sha256.hpp"
#include "pq5g/handshake/connection.hpp"
#include "pq5g/kem/params.hpp"
#include "pq5g/rng.hpp"
#include "pq5g/ue/events.hpp"

namespace pq5g::ue {

// User payloads carry a 4-byte port header: src_port || dst_port, big-endian.
// The responder listens on kServerPort; initiators send from kClientPort.
inline constexpr uint16_t kServerPort = 4433;
inline constexpr uint16_t kClientPort = 49152;
inline constexpr size_t kPortHeaderLen = 4;

enum class UeState { kIdle, kRegistering, kSessionPending, kReady, kFailed };

inline const char* ue_state_name(UeState s) {
  switch (s) {
    case UeState::kIdle: return "idle";
    case UeState::kRegistering: return "registering";
    case UeState::kSessionPending: return "session_pending";
    case UeState::kReady: return "ready";
    case UeState::kFailed: return "failed";
  }
  return "?";
}

struct UeConfig {
  std::string id;
  std::string supi;
  std::array<uint8_t, 32> k{};
  std::string gnb_id;
  bool is_client = false;
  std::vector<kem::KemMode> modes;
  handshake::Certificate certificate;
  std::array<uint8_t, crypto::kEd25519SeedLen> signing_seed{};
  std::vector<handshake::TrustAnchor> trust_anchors;
  int64_t now = 0;  // certificate validation clock, unix seconds
  std::string dnn = "internet";
  bool echo = true;  // responder echoes each received message back
};

// Exchanges the initiator/responder roles of two endpoints. Applying it
// twice restores the original assignment.
inline void swap_roles(UeConfig& a, UeConfig& b) {
  std::swap(a.is_client, b.is_client);
}

struct UeFailure {
  StepTag step;  // first workflow step that can no longer be reached
  std::string detail;
};

// A simulated UE: registers with the core, establishes a PDU session, then
// runs the authenticated key exchange with a peer UE over the user plane.
class UeNode final : public core5g::Node {
 public:
  UeNode(UeConfig config, RandomSource& rng)
      : Node(config.id), cfg_(std::move(config)), rng_(&rng) {
    if (cfg_.modes.empty())
      throw std::invalid_argument("ue needs at least one mode");
  }

  const UeConfig& config() const { return cfg_; }
  UeState state() const { return state_; }
  bool ready() const { return state_ == UeState::kReady; }
  uint32_t ue_ip() const { return ue_ip_; }
  const std::optional<core5g::SessionGrant>& grant() const { return grant_; }
  const EventTranscript& events() const { return events_; }
  const std::optional<UeFailure>& failure() const { return failure_; }
  size_t drops() const { return drops_; }

  bool handshake_complete() const {
    return conn_ && conn_->phase() == handshake::Phase::kConnected;
  }

  std::optional<kem::KemMode> negotiated_mode() const {
    return conn_ ? conn_->negotiated_mode() : std::nullopt;
  }

  const std::vector<Bytes>& sent_messages() const { return sent_; }
  const std::vector<Bytes>& received_messages() const { return received_; }

  // Initiator wall time from HelloSent to HandshakeComplete.
  std::optional<uint64_t> handshake_duration_us() const {
    if (!hello_sent_us_ || !complete_us_) return std::nullopt;
    return *complete_us_ - *hello_sent_us_;
  }

  // Starts registration with the core network.
  void power_on() {
    if (state_ != UeState::kIdle) throw std::logic_error("ue already powered on");
    state_ = UeState::kRegistering;
    send(cfg_.gnb_id, core5g::ctrl_frame(core5g::CtrlType::kRegistrationRequest,
                                         core5g::supi_body(cfg_.supi)));
  }

  // Initiator only: opens the secure connection to the peer UE and queues
  // `message` for delivery once the handshake completes.
  void connect(uint32_t peer_ip, Bytes message) {
    if (!cfg_.is_client) throw std::logic_error("responder cannot initiate");
    if (state_ != UeState::kReady)
      throw std::logic_error("connect before session established");
    if (conn_ && conn_->phase() != handshake::Phase::kFailed)
      throw std::logic_error("connection already active");
    peer_ip_ = peer_ip;
    peer_port_ = kServerPort;
    local_port_ = kClientPort;
    pending_message_ = std::move(message);
    make_connection(true);
    send_datagram(conn_->start());
  }

  // Encrypts and sends one application message over the established
  // connection.
  void secure_send(BytesView payload) {
    if (!handshake_complete())
      throw std::logic_error("secure_send before handshake complete");
    Bytes record = conn_->seal_message(payload);
    sent_.emplace_back(payload.begin(), payload.end());
    emit(StepTag::kMessageSent, digest_detail(payload));
    send_datagram(std::move(record));
  }

  // Exchanges which endpoint initiates the next connection. Refused while
  // either endpoint has a live connection.
  static void swap_roles(UeNode& a, UeNode& b) {
    if (a.connection_active() || b.connection_active())
      throw std::logic_error("cannot swap roles with an active connection");
    a.conn_.reset();
    b.conn_.reset();
    std::swap(a.cfg_.is_client, b.cfg_.is_client);
  }

  void on_frame(const std::string& from, BytesView frame) override {
    (void)from;
    core5g::CtrlFrame msg;
    try {
      msg = core5g::parse_ctrl_frame(frame);
    } catch (const ParseError&) {
      drops_++;
      return;
    }
    try {
      handle(msg);
    } catch (const ParseError&) {
      drops_++;
    }
  }

 private:
  bool connection_active() const {
    return conn_ && conn_->phase() != handshake::Phase::kFailed;
  }

  void handle(const core5g::CtrlFrame& msg) {
    switch (msg.type) {
      case core5g::CtrlType::kRegistrationChallenge: {
        ByteReader r(msg.body);
        std::string supi = core5g::read_string8(r);
        BytesView nonce = r.take(core5g::kNonceLen);
        r.expect_end();
        if (supi != cfg_.supi || state_ != UeState::kRegistering) {
          drops_++;
          return;
        }
        auto mac = crypto::hmac_sha256(view(cfg_.k), nonce);
        Bytes body = core5g::supi_body(cfg_.supi);
        append(body, view(mac));
        send(cfg_.gnb_id,
             core5g::ctrl_frame(core5g::CtrlType::kRegistrationResponse, body));
        return;
      }
      case core5g::CtrlType::kRegistrationAccept: {
        if (state_ != UeState::kRegistering) {
          drops_++;
          return;
        }
        emit(StepTag::kRegistered, "supi=" + cfg_.supi);
        state_ = UeState::kSessionPending;
        Bytes body;
        core5g::append_string8(body, cfg_.supi);
        core5g::append_string8(body, cfg_.dnn);
        send(cfg_.gnb_id,
             core5g::ctrl_frame(core5g::CtrlType::kSessionRequest, body));
        return;
      }
      case core5g::CtrlType::kRegistrationReject: {
        ByteReader r(msg.body);
        core5g::read_string8(r);
        std::string cause = core5g::read_string8(r);
        set_failure(StepTag::kRegistered, cause);
        return;
      }
      case core5g::CtrlType::kSessionAccept: {
        if (state_ != UeState::kSessionPending) {
          drops_++;
          return;
        }
        grant_ = core5g::parse_session_grant(msg.body);
        ue_ip_ = grant_->ue_ip;
        emit(StepTag::kSessionEstablished,
             "ip=" + core5g::format_ipv4(ue_ip_) +
                 " session=" + std::to_string(grant_->session_id));
        prepare_shares();
        state_ = UeState::kReady;
        return;
      }
      case core5g::CtrlType::kSessionReject: {
        ByteReader r(msg.body);
        core5g::read_string8(r);
        std::string cause = core5g::read_string8(r);
        set_failure(StepTag::kSessionEstablished, cause);
        return;
      }
      case core5g::CtrlType::kUserData:
        handle_user_data(msg.body);
        return;
      default:
        drops_++;
        return;
    }
  }

  // Ephemeral keypairs for every offered mode, generated once the PDU
  // session is up and consumed by the next handshake.
  void prepare_shares() {
    prepared_.clear();
    std::string detail = "modes=";
    for (size_t i = 0; i < cfg_.modes.size(); i++) {
      const kem::KemMode& mode = cfg_.modes[i];
      handshake::PreparedShare share;
      auto [ek, dk] = kem::keygen(mode.params(), *rng_);
      share.kem_public = std::move(ek);
      share.kem_private = std::move(dk);
      if (mode.hybrid) share.classical = crypto::x25519_keypair(*rng_);
      prepared_[mode.wire_byte()] = std::move(share);
      if (i) detail += ",";
      detail += mode.name();
    }
    emit(StepTag::kKeypairGenerated, detail);
  }

  void make_connection(bool is_client) {
    handshake::ConnectionConfig cc;
    cc.is_client = is_client;
    cc.modes = cfg_.modes;
    cc.certificate = cfg_.certificate;
    cc.signing_seed = cfg_.signing_seed;
    cc.trust_anchors = cfg_.trust_anchors;
    cc.now = cfg_.now;
    cc.prepared = std::move(prepared_);
    prepared_.clear();
    conn_.emplace(std::move(cc), *rng_);
    conn_->set_event_hook([this](handshake::HsEvent e) { on_hs_event(e); });
  }

  void on_hs_event(handshake::HsEvent e) {
    std::string mode;
    if (conn_ && conn_->negotiated_mode()) mode = "mode=" + conn_->negotiated_mode()->name();
    switch (e) {
      case handshake::HsEvent::kHelloSent:
        emit(StepTag::kHelloSent, mode);
        if (cfg_.is_client && !hello_sent_us_) hello_sent_us_ = last_event_us();
        return;
      case handshake::HsEvent::kHelloReceived:
        emit(StepTag::kHelloReceived, mode);
        return;
      case handshake::HsEvent::kSecretEncapsulated:
        emit(StepTag::kSecretEncapsulated, mode);
        return;
      case handshake::HsEvent::kSecretDecapsulated:
        emit(StepTag::kSecretDecapsulated, mode);
        return;
      case handshake::HsEvent::kScheduleDerived:
        emit(StepTag::kScheduleDerived, mode);
        return;
      case handshake::HsEvent::kCertificateVerified: {
        std::string subject;
        if (conn_ && conn_->peer_certificate())
          subject = "peer=" + conn_->peer_certificate()->subject_id;
        emit(StepTag::kCertificatesVerified, subject);
        return;
      }
      case handshake::HsEvent::kFinishedVerified:
        return;  // folded into HandshakeComplete
      case handshake::HsEvent::kConnected:
        emit(StepTag::kHandshakeComplete, mode);
        complete_us_ = last_event_us();
        return;
      case handshake::HsEvent::kFailed: {
        std::string reason = "handshake failed";
        if (conn_ && conn_->error()) reason = conn_->error()->reason;
        set_failure(complete_us_ ? StepTag::kMessageReceived
                                 : StepTag::kHandshakeComplete,
                    reason);
        return;
      }
    }
  }

  void handle_user_data(BytesView body) {
    auto parsed = core5g::parse_inner(body);
    if (!parsed) {
      drops_++;
      return;
    }
    const core5g::InnerPacket& inner = *parsed;
    if (state_ != UeState::kReady || inner.dst_ip != ue_ip_ ||
        inner.payload.size() < kPortHeaderLen) {
      drops_++;
      return;
    }
    ByteReader r(view(inner.payload));
    uint16_t src_port = r.u16be();
    uint16_t dst_port = r.u16be();
    BytesView datagram = r.take(r.remaining());

    if (!conn_) {
      if (cfg_.is_client || dst_port != kServerPort) {
        drops_++;
        return;
      }
      peer_ip_ = inner.src_ip;
      peer_port_ = src_port;
      local_port_ = kServerPort;
      make_connection(false);
    } else if (inner.src_ip != peer_ip_ || dst_port != local_port_) {
      drops_++;
      return;
    }

    Bytes response = conn_->consume(datagram);
    if (!response.empty()) send_datagram(std::move(response));

    for (const Bytes& m : conn_->take_received()) {
      received_.push_back(m);
      emit(StepTag::kMessageReceived, digest_detail(view(m)));
      if (!cfg_.is_client && cfg_.echo && handshake_complete()) secure_send(view(m));
    }

    if (handshake_complete() && cfg_.is_client && pending_message_) {
      Bytes message = std::move(*pending_message_);
      pending_message_.reset();
      secure_send(view(message));
    }
  }

  void send_datagram(Bytes records) {
    Bytes payload;
    append_u16be(payload, local_port_);
    append_u16be(payload, peer_port_);
    append(payload, view(records));
    Bytes inner = core5g::pack_inner({ue_ip_, peer_ip_, std::move(payload)});
    send(cfg_.gnb_id, core5g::ctrl_frame(core5g::CtrlType::kUserData, inner));
  }

  void emit(StepTag tag, std::string detail = {}) {
    events_.push_back(Event{tag, net_ ? net_->now_us() : 0, std::move(detail)});
  }

  uint64_t last_event_us() const {
    return events_.empty() ? 0 : events_.back().t_us;
  }

  void set_failure(StepTag step, std::string detail) {
    if (!failure_) failure_ = UeFailure{step, std::move(detail)};
    if (step == StepTag::kRegistered || step == StepTag::kSessionEstablished)
      state_ = UeState::kFailed;
  }

  static std::string digest_detail(BytesView payload) {
    auto digest = crypto::sha256(payload);
    return "sha256=" + to_hex(BytesView(digest.data(), 8));
  }

  UeConfig cfg_;
  RandomSource* rng_;
  UeState state_ = UeState::kIdle;
  uint32_t ue_ip_ = 0;
  std::optional<core5g::SessionGrant> grant_;
  std::map<uint8_t, handshake::PreparedShare> prepared_;
  std::optional<handshake::Connection> conn_;
  uint32_t peer_ip_ = 0;
  uint16_t peer_port_ = 0;
  uint16_t local_port_ = 0;
  std::optional<Bytes> pending_message_;
  std::vector<Bytes> sent_;
  std::vector<Bytes> received_;
  EventTranscript events_;
  std::optional<UeFailure> failure_;
  std::optional<uint64_t> hello_sent_us_;
  std::optional<uint64_t> complete_us_;
  size_t drops_ = 0;
};

}  // namespace pq5g::ue
