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
#include <vector>

#include "pq5g/bytes.hpp"
#include "pq5g/handshake/certificate.hpp"
#include "pq5g/handshake/schedule.hpp"
#include "pq5g/kem/params.hpp"

namespace pq5g::handshake {

enum class HandshakeType : uint8_t {
  kClientHello = 1,
  kServerHello = 2,
  kCertificate = 11,
  kCertificateVerify = 15,
  kFinished = 20,
};

inline constexpr size_t kRandomLen = 32;
inline constexpr size_t kFinishedLen = 32;

// type(1) || length(3, big-endian) || body
inline Bytes frame_message(HandshakeType type, BytesView body) {
  if (body.size() > 0xffffff)
    throw std::invalid_argument("handshake message too long");
  Bytes out;
  out.push_back(static_cast<uint8_t>(type));
  append_u24be(out, static_cast<uint32_t>(body.size()));
  append(out, body);
  return out;
}

struct Frame {
  HandshakeType type;
  BytesView body;
};

inline Frame parse_frame(BytesView framed) {
  ByteReader r(framed);
  uint8_t t = r.u8();
  if (t != static_cast<uint8_t>(HandshakeType::kClientHello) &&
      t != static_cast<uint8_t>(HandshakeType::kServerHello) &&
      t != static_cast<uint8_t>(HandshakeType::kCertificate) &&
      t != static_cast<uint8_t>(HandshakeType::kCertificateVerify) &&
      t != static_cast<uint8_t>(HandshakeType::kFinished))
    throw ParseError("unknown handshake message type");
  size_t len = r.u24be();
  BytesView body = r.take(len);
  r.expect_end();
  return Frame{static_cast<HandshakeType>(t), body};
}

// One offered key share: the lattice encapsulation key for the mode, plus an
// X25519 public key when the mode is hybrid.
struct KeyShare {
  kem::KemMode mode;
  Bytes kem_public;
  Bytes classical_public;  // empty or 32 bytes

  bool operator==(const KeyShare&) const = default;
};

struct ClientHello {
  std::array<uint8_t, kRandomLen> random;
  std::vector<kem::KemMode> offered;
  std::vector<KeyShare> shares;
};

struct ServerHello {
  std::array<uint8_t, kRandomLen> random;
  kem::KemMode selected;
  Bytes kem_ciphertext;
  Bytes classical_public;  // empty or 32 bytes
};

inline Bytes serialize_client_hello(const ClientHello& ch) {
  Bytes out;
  append(out, view(ch.random));
  out.push_back(static_cast<uint8_t>(ch.offered.size()));
  for (auto m : ch.offered) out.push_back(m.wire_byte());
  out.push_back(static_cast<uint8_t>(ch.shares.size()));
  for (const auto& s : ch.shares) {
    out.push_back(s.mode.wire_byte());
    append_u16be(out, static_cast<uint16_t>(s.kem_public.size()));
    append(out, s.kem_public);
    out.push_back(static_cast<uint8_t>(s.classical_public.size()));
    append(out, s.classical_public);
  }
  return out;
}

inline ClientHello parse_client_hello(BytesView body) {
  ByteReader r(body);
  ClientHello ch;
  auto rnd = r.take(kRandomLen);
  std::copy(rnd.begin(), rnd.end(), ch.random.begin());
  size_t n_modes = r.u8();
  if (n_modes == 0) throw ParseError("hello offers no modes");
  for (size_t i = 0; i < n_modes; i++) {
    auto mode = kem::KemMode::from_wire(r.u8());
    if (!mode) throw ParseError("hello offers an unknown mode");
    for (auto seen : ch.offered)
      if (seen == *mode) throw ParseError("hello offers a duplicate mode");
    ch.offered.push_back(*mode);
  }
  size_t n_shares = r.u8();
  for (size_t i = 0; i < n_shares; i++) {
    KeyShare share;
    auto mode = kem::KemMode::from_wire(r.u8());
    if (!mode) throw ParseError("key share has an unknown mode");
    share.mode = *mode;
    size_t kem_len = r.u16be();
    if (kem_len != share.mode.params().ek_len)
      throw ParseError("key share has wrong encapsulation key length");
    auto kem_pub = r.take(kem_len);
    share.kem_public.assign(kem_pub.begin(), kem_pub.end());
    size_t classical_len = r.u8();
    if (classical_len != (share.mode.hybrid ? 32u : 0u))
      throw ParseError("key share has wrong classical key length");
    auto classical = r.take(classical_len);
    share.classical_public.assign(classical.begin(), classical.end());
    bool offered = false;
    for (auto m : ch.offered) offered = offered || m == share.mode;
    if (!offered) throw ParseError("key share for a mode not offered");
    ch.shares.push_back(std::move(share));
  }
  r.expect_end();
  return ch;
}

inline Bytes serialize_server_hello(const ServerHello& sh) {
  Bytes out;
  append(out, view(sh.random));
  out.push_back(sh.selected.wire_byte());
  append_u16be(out, static_cast<uint16_t>(sh.kem_ciphertext.size()));
  append(out, sh.kem_ciphertext);
  out.push_back(static_cast<uint8_t>(sh.classical_public.size()));
  append(out, sh.classical_public);
  return out;
}

inline ServerHello parse_server_hello(BytesView body) {
  ByteReader r(body);
  ServerHello sh;
  auto rnd = r.take(kRandomLen);
  std::copy(rnd.begin(), rnd.end(), sh.random.begin());
  auto mode = kem::KemMode::from_wire(r.u8());
  if (!mode) throw ParseError("server selected an unknown mode");
  sh.selected = *mode;
  size_t ct_len = r.u16be();
  if (ct_len != sh.selected.params().ct_len)
    throw ParseError("server hello has wrong ciphertext length");
  auto ct = r.take(ct_len);
  sh.kem_ciphertext.assign(ct.begin(), ct.end());
  size_t classical_len = r.u8();
  if (classical_len != (sh.selected.hybrid ? 32u : 0u))
    throw ParseError("server hello has wrong classical key length");
  auto classical = r.take(classical_len);
  sh.classical_public.assign(classical.begin(), classical.end());
  r.expect_end();
  return sh;
}

inline Bytes serialize_certificate_msg(const Certificate& cert) {
  return serialize_certificate(cert);
}

inline Certificate parse_certificate_msg(BytesView body) {
  ByteReader r(body);
  Certificate cert = parse_certificate(r);
  r.expect_end();
  return cert;
}

inline Bytes serialize_certificate_verify(
    const std::array<uint8_t, crypto::kEd25519SignatureLen>& sig) {
  return Bytes(sig.begin(), sig.end());
}

inline std::array<uint8_t, crypto::kEd25519SignatureLen> parse_certificate_verify(
    BytesView body) {
  if (body.size() != crypto::kEd25519SignatureLen)
    throw ParseError("certificate verify has wrong length");
  std::array<uint8_t, crypto::kEd25519SignatureLen> sig;
  std::copy(body.begin(), body.end(), sig.begin());
  return sig;
}

// Signature input for CertificateVerify: repeated-space padding, a role
// context string, a zero separator, then the transcript hash to date.
inline Bytes certificate_verify_content(bool from_server, const Digest& transcript) {
  Bytes content(64, 0x20);
  append(content, to_bytes(from_server ? "pq5g server CertificateVerify"
                                       : "pq5g client CertificateVerify"));
  content.push_back(0);
  append(content, view(transcript));
  return content;
}

inline Bytes serialize_finished(const Digest& verify_data) {
  return Bytes(verify_data.begin(), verify_data.end());
}

inline Digest parse_finished(BytesView body) {
  if (body.size() != kFinishedLen) throw ParseError("finished has wrong length");
  Digest d;
  std::copy(body.begin(), body.end(), d.begin());
  return d;
}

}  // namespace pq5g::handshake
