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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pq5g/bytes.hpp"
#include "pq5g/crypto/ed25519.hpp"
#include "pq5g/crypto/x25519.hpp"
#include "pq5g/handshake/certificate.hpp"
#include "pq5g/handshake/messages.hpp"
#include "pq5g/handshake/record.hpp"
#include "pq5g/handshake/schedule.hpp"
#include "pq5g/kem/hybrid.hpp"
#include "pq5g/kem/mlkem.hpp"
#include "pq5g/rng.hpp"

namespace pq5g::handshake {

enum class Phase {
  kStart,
  kAwaitServerFlight,
  kAwaitClientFlight,
  kConnected,
  kFailed,
};

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kStart: return "start";
    case Phase::kAwaitServerFlight: return "await_server_flight";
    case Phase::kAwaitClientFlight: return "await_client_flight";
    case Phase::kConnected: return "connected";
    case Phase::kFailed: return "failed";
  }
  return "?";
}

enum class AlertCode : uint8_t {
  kHandshakeFailure = 40,
  kCertificateError = 42,
  kIllegalParameter = 47,
  kDecryptError = 51,
};

inline const char* alert_name(AlertCode a) {
  switch (a) {
    case AlertCode::kHandshakeFailure: return "handshake_failure";
    case AlertCode::kCertificateError: return "certificate_error";
    case AlertCode::kIllegalParameter: return "illegal_parameter";
    case AlertCode::kDecryptError: return "decrypt_error";
  }
  return "?";
}

enum class HsEvent {
  kHelloSent,
  kHelloReceived,
  kSecretEncapsulated,  // responder side
  kSecretDecapsulated,  // initiator side
  kScheduleDerived,
  kCertificateVerified,
  kFinishedVerified,
  kConnected,
  kFailed,
};

struct ConnectionError {
  AlertCode code;
  std::string reason;
};

// Key material prepared ahead of the handshake so a caller can generate (and
// log) its keypairs before the first message goes out. The classical pair is
// present exactly for hybrid modes.
struct PreparedShare {
  kem::EncapsKey kem_public;
  kem::DecapsKey kem_private;
  std::optional<crypto::X25519KeyPair> classical;
};

struct ConnectionConfig {
  bool is_client = true;
  std::vector<kem::KemMode> modes;  // offer order (client) / preference order (server)
  Certificate certificate;
  std::array<uint8_t, crypto::kEd25519SeedLen> signing_seed{};
  std::vector<TrustAnchor> trust_anchors;
  int64_t now = 0;  // certificate validation clock, unix seconds
  std::map<uint8_t, PreparedShare> prepared;  // keyed by mode wire byte
};

// One endpoint of the authenticated key exchange. Drive it with start()
// (client only) and consume(); both return wire bytes to hand to the peer.
// DATAGRAM INVARIANT: each return value is one datagram, and each side's
// flight travels whole: client hello / server hello + server auth flight /
// client auth flight.
class Connection {
 public:
  Connection(ConnectionConfig config, RandomSource& rng)
      : config_(std::move(config)), rng_(&rng) {
    if (config_.modes.empty())
      throw std::invalid_argument("connection needs at least one mode");
  }

  void set_event_hook(std::function<void(HsEvent)> hook) { hook_ = std::move(hook); }

  Phase phase() const { return phase_; }
  const std::optional<ConnectionError>& error() const { return error_; }
  const std::optional<kem::KemMode>& negotiated_mode() const { return negotiated_; }
  const std::optional<Certificate>& peer_certificate() const { return peer_cert_; }
  const KeySchedule& schedule() const { return schedule_; }

  // Decrypted application payloads, in arrival order.
  std::vector<Bytes> take_received() { return std::exchange(received_, {}); }

  Bytes start() {
    if (!config_.is_client) throw std::logic_error("server cannot start");
    if (phase_ != Phase::kStart) throw std::logic_error("handshake already started");

    ClientHello ch;
    ch.random = rng_->array<kRandomLen>();
    ch.offered = config_.modes;
    for (const auto& mode : config_.modes) {
      const PreparedShare& share = share_for(mode);
      KeyShare ks;
      ks.mode = mode;
      ks.kem_public = share.kem_public.bytes;
      if (share.classical)
        ks.classical_public.assign(share.classical->public_key.begin(),
                                   share.classical->public_key.end());
      ch.shares.push_back(std::move(ks));
    }
    Bytes frame = frame_message(HandshakeType::kClientHello,
                                serialize_client_hello(ch));
    transcript_.update(frame);
    phase_ = Phase::kAwaitServerFlight;
    emit(HsEvent::kHelloSent);
    return plaintext_record(ContentType::kHandshake, frame);
  }

  Bytes consume(BytesView datagram) {
    if (phase_ == Phase::kFailed) return {};
    try {
      return dispatch(datagram);
    } catch (const ParseError& e) {
      return fail(AlertCode::kIllegalParameter, e.what());
    } catch (const std::invalid_argument& e) {
      return fail(AlertCode::kIllegalParameter, e.what());
    }
  }

  // Seals one application message; valid only once connected.
  Bytes seal_message(BytesView plaintext) {
    if (phase_ != Phase::kConnected)
      throw std::logic_error("seal_message before connection established");
    return sealed_record(*app_send_, ContentType::kApplicationData, plaintext);
  }

 private:
  Bytes dispatch(BytesView datagram) {
    auto records = split_records(datagram);
    if (records.empty()) throw ParseError("empty datagram");

    if (records.size() == 1 && records[0].type == ContentType::kAlert)
      return on_alert(records[0]);

    switch (phase_) {
      case Phase::kStart:
        if (config_.is_client) throw ParseError("client consumed before start");
        return on_client_hello(records);
      case Phase::kAwaitServerFlight:
        return on_server_flight(records);
      case Phase::kAwaitClientFlight:
        return on_client_flight(records);
      case Phase::kConnected:
        return on_application(records);
      case Phase::kFailed:
        return {};
    }
    return {};
  }

  Bytes on_alert(const WireRecord& rec) {
    AlertCode code = AlertCode::kHandshakeFailure;
    if (rec.body.size() == 2) code = static_cast<AlertCode>(rec.body[1]);
    phase_ = Phase::kFailed;
    error_ = ConnectionError{code, std::string("peer alert: ") + alert_name(code)};
    emit(HsEvent::kFailed);
    return {};
  }

  Bytes on_client_hello(const std::vector<WireRecord>& records) {
    if (records.size() != 1 || records[0].type != ContentType::kHandshake)
      throw ParseError("expected exactly one hello record");
    Frame frame = parse_frame(records[0].body);
    if (frame.type != HandshakeType::kClientHello)
      throw ParseError("expected client hello");
    ClientHello ch = parse_client_hello(frame.body);
    emit(HsEvent::kHelloReceived);
    transcript_.update(records[0].body);

    const KeyShare* share = nullptr;
    for (const auto& preference : config_.modes) {
      for (const auto& s : ch.shares) {
        if (s.mode == preference) {
          share = &s;
          break;
        }
      }
      if (share != nullptr) break;
    }
    if (share == nullptr)
      return fail(AlertCode::kHandshakeFailure, "no mode in common");
    negotiated_ = share->mode;

    // Encapsulate against the client's lattice share; reject keys that fail
    // validation rather than deriving from them.
    kem::EncapsKey client_ek{share->mode.level, share->kem_public};
    std::pair<kem::KemCiphertext, kem::SharedSecret> enc;
    try {
      enc = kem::encaps(client_ek, *rng_);
    } catch (const std::invalid_argument& e) {
      return fail(AlertCode::kIllegalParameter, e.what());
    }

    ServerHello sh;
    sh.random = rng_->array<kRandomLen>();
    sh.selected = share->mode;
    sh.kem_ciphertext = enc.first.bytes;

    std::optional<std::array<uint8_t, 32>> classical_ss;
    if (share->mode.hybrid) {
      crypto::X25519KeyPair pair = classical_pair_for(share->mode);
      auto ss = crypto::x25519_shared(pair.private_key, share->classical_public);
      if (!ss)
        return fail(AlertCode::kIllegalParameter, "invalid classical key share");
      classical_ss = *ss;
      sh.classical_public.assign(pair.public_key.begin(), pair.public_key.end());
    }
    Bytes ikm = kem::combine_secrets(share->mode, classical_ss, enc.second);
    emit(HsEvent::kSecretEncapsulated);

    Bytes sh_frame = frame_message(HandshakeType::kServerHello,
                                   serialize_server_hello(sh));
    transcript_.update(sh_frame);
    emit(HsEvent::kHelloSent);
    Bytes out = plaintext_record(ContentType::kHandshake, sh_frame);

    schedule_ = KeySchedule::derive(ikm, transcript_.digest());
    emit(HsEvent::kScheduleDerived);
    hs_send_ = record_keys_from(schedule_.server_hs_secret);
    hs_recv_ = record_keys_from(schedule_.client_hs_secret);

    append(out, send_auth_flight(schedule_.server_hs_secret));
    phase_ = Phase::kAwaitClientFlight;
    return out;
  }

  Bytes on_server_flight(const std::vector<WireRecord>& records) {
    if (records.size() != 4) throw ParseError("expected server hello plus auth flight");
    if (records[0].type != ContentType::kHandshake)
      throw ParseError("expected handshake record");
    Frame frame = parse_frame(records[0].body);
    if (frame.type != HandshakeType::kServerHello)
      throw ParseError("expected server hello");
    ServerHello sh = parse_server_hello(frame.body);
    emit(HsEvent::kHelloReceived);

    bool offered = false;
    for (const auto& m : config_.modes) offered = offered || m == sh.selected;
    if (!offered)
      return fail(AlertCode::kIllegalParameter, "server selected unoffered mode");
    negotiated_ = sh.selected;

    const PreparedShare& share = share_for(sh.selected);
    kem::SharedSecret pq_ss = kem::decaps(
        share.kem_private, kem::KemCiphertext{sh.selected.level, sh.kem_ciphertext});
    std::optional<std::array<uint8_t, 32>> classical_ss;
    if (sh.selected.hybrid) {
      auto ss = crypto::x25519_shared(share.classical->private_key,
                                      sh.classical_public);
      if (!ss)
        return fail(AlertCode::kIllegalParameter, "invalid classical server key");
      classical_ss = *ss;
    }
    Bytes ikm = kem::combine_secrets(sh.selected, classical_ss, pq_ss);
    emit(HsEvent::kSecretDecapsulated);

    transcript_.update(records[0].body);
    schedule_ = KeySchedule::derive(ikm, transcript_.digest());
    emit(HsEvent::kScheduleDerived);
    hs_send_ = record_keys_from(schedule_.client_hs_secret);
    hs_recv_ = record_keys_from(schedule_.server_hs_secret);

    if (auto alert = read_auth_flight(records, 1, schedule_.server_hs_secret))
      return *alert;

    schedule_.complete(transcript_.digest());
    Bytes out = send_auth_flight(schedule_.client_hs_secret);
    app_send_ = record_keys_from(*schedule_.client_app_secret);
    app_recv_ = record_keys_from(*schedule_.server_app_secret);
    phase_ = Phase::kConnected;
    emit(HsEvent::kConnected);
    return out;
  }

  Bytes on_client_flight(const std::vector<WireRecord>& records) {
    if (records.size() != 3) throw ParseError("expected client auth flight");
    // Application secrets bind the transcript through the server Finished,
    // which is exactly the current transcript state.
    schedule_.complete(transcript_.digest());
    if (auto alert = read_auth_flight(records, 0, schedule_.client_hs_secret))
      return *alert;
    app_send_ = record_keys_from(*schedule_.server_app_secret);
    app_recv_ = record_keys_from(*schedule_.client_app_secret);
    phase_ = Phase::kConnected;
    emit(HsEvent::kConnected);
    return {};
  }

  Bytes on_application(const std::vector<WireRecord>& records) {
    for (const auto& rec : records) {
      if (rec.type == ContentType::kAlert) return on_alert(rec);
      if (rec.type != ContentType::kApplicationData)
        return fail(AlertCode::kIllegalParameter, "unexpected record type");
      auto opened = record_open(*app_recv_, rec.body, rec.header);
      if (!opened) return fail(AlertCode::kDecryptError, "application record failed");
      received_.push_back(std::move(*opened));
    }
    return {};
  }

  // Builds Certificate, CertificateVerify and Finished under the given
  // handshake traffic secret, updating the transcript along the way.
  Bytes send_auth_flight(const Digest& traffic_secret) {
    Bytes out;
    Bytes cert_frame = frame_message(HandshakeType::kCertificate,
                                     serialize_certificate_msg(config_.certificate));
    transcript_.update(cert_frame);
    append(out, sealed_record(*hs_send_, ContentType::kHandshake, cert_frame));

    Bytes content =
        certificate_verify_content(!config_.is_client, transcript_.digest());
    auto sig = crypto::ed25519_sign(config_.signing_seed, content);
    Bytes cv_frame = frame_message(HandshakeType::kCertificateVerify,
                                   serialize_certificate_verify(sig));
    transcript_.update(cv_frame);
    append(out, sealed_record(*hs_send_, ContentType::kHandshake, cv_frame));

    Digest verify = finished_verify_data(traffic_secret, transcript_.digest());
    Bytes fin_frame = frame_message(HandshakeType::kFinished,
                                    serialize_finished(verify));
    transcript_.update(fin_frame);
    append(out, sealed_record(*hs_send_, ContentType::kHandshake, fin_frame));
    return out;
  }

  // Opens and checks the peer's auth flight starting at records[first].
  // Returns an alert datagram on failure, nullopt on success.
  std::optional<Bytes> read_auth_flight(const std::vector<WireRecord>& records,
                                        size_t first,
                                        const Digest& traffic_secret) {
    Frame frames[3];
    Bytes opened[3];
    for (size_t i = 0; i < 3; i++) {
      const WireRecord& rec = records[first + i];
      if (rec.type != ContentType::kHandshake)
        return fail(AlertCode::kIllegalParameter, "unexpected record type");
      auto plain = record_open(*hs_recv_, rec.body, rec.header);
      if (!plain)
        return fail(AlertCode::kDecryptError, "handshake record failed to open");
      opened[i] = std::move(*plain);
      frames[i] = parse_frame(opened[i]);
    }
    if (frames[0].type != HandshakeType::kCertificate ||
        frames[1].type != HandshakeType::kCertificateVerify ||
        frames[2].type != HandshakeType::kFinished)
      return fail(AlertCode::kIllegalParameter, "auth flight out of order");

    Certificate cert = parse_certificate_msg(frames[0].body);
    CertVerdict verdict =
        validate_certificate(cert, config_.trust_anchors, config_.now);
    if (verdict != CertVerdict::kOk)
      return fail(AlertCode::kCertificateError,
                  std::string("certificate rejected: ") + cert_verdict_name(verdict));
    transcript_.update(opened[0]);

    auto sig = parse_certificate_verify(frames[1].body);
    Bytes content =
        certificate_verify_content(config_.is_client, transcript_.digest());
    if (!crypto::ed25519_verify(cert.subject_pubkey, content, sig))
      return fail(AlertCode::kCertificateError, "certificate verify failed");
    transcript_.update(opened[1]);
    peer_cert_ = cert;
    emit(HsEvent::kCertificateVerified);

    Digest expected = finished_verify_data(traffic_secret, transcript_.digest());
    Digest got = parse_finished(frames[2].body);
    if (!ct_equal(view(expected), view(got)))
      return fail(AlertCode::kDecryptError, "finished verification failed");
    transcript_.update(opened[2]);
    emit(HsEvent::kFinishedVerified);
    return std::nullopt;
  }

  Bytes fail(AlertCode code, std::string reason) {
    phase_ = Phase::kFailed;
    error_ = ConnectionError{code, std::move(reason)};
    emit(HsEvent::kFailed);
    Bytes body{2, static_cast<uint8_t>(code)};  // fatal level, description
    return plaintext_record(ContentType::kAlert, body);
  }

  const PreparedShare& share_for(const kem::KemMode& mode) {
    uint8_t key = mode.wire_byte();
    auto it = config_.prepared.find(key);
    if (it == config_.prepared.end()) {
      auto [ek, dk] = kem::keygen(mode.params(), *rng_);
      PreparedShare share{std::move(ek), std::move(dk), std::nullopt};
      it = config_.prepared.emplace(key, std::move(share)).first;
    }
    if (mode.hybrid && !it->second.classical)
      it->second.classical = crypto::x25519_keypair(*rng_);
    return it->second;
  }

  crypto::X25519KeyPair classical_pair_for(const kem::KemMode& mode) {
    auto it = config_.prepared.find(mode.wire_byte());
    if (it != config_.prepared.end() && it->second.classical)
      return *it->second.classical;
    return crypto::x25519_keypair(*rng_);
  }

  void emit(HsEvent e) {
    if (hook_) hook_(e);
  }

  ConnectionConfig config_;
  RandomSource* rng_;
  std::function<void(HsEvent)> hook_;

  Phase phase_ = Phase::kStart;
  std::optional<ConnectionError> error_;
  std::optional<kem::KemMode> negotiated_;
  std::optional<Certificate> peer_cert_;
  crypto::Sha256 transcript_;
  KeySchedule schedule_{};
  std::optional<RecordKeys> hs_send_, hs_recv_;
  std::optional<RecordKeys> app_send_, app_recv_;
  std::vector<Bytes> received_;
};

}  // namespace pq5g::handshake
