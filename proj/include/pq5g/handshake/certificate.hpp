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
#include <vector>

#include "pq5g/bytes.hpp"
#include "pq5g/crypto/ed25519.hpp"

namespace pq5g::handshake {

// Compact identity credential: an Ed25519 binding of a subject name to its
// signing key, endorsed by a named issuer.
struct Certificate {
  std::string subject_id;
  std::array<uint8_t, crypto::kEd25519PublicKeyLen> subject_pubkey;
  std::string issuer_id;
  int64_t not_before = 0;
  int64_t not_after = 0;
  std::array<uint8_t, crypto::kEd25519SignatureLen> signature;

  bool operator==(const Certificate&) const = default;
};

struct TrustAnchor {
  std::string issuer_id;
  std::array<uint8_t, crypto::kEd25519PublicKeyLen> pubkey;
};

enum class CertVerdict { kOk, kUnknownIssuer, kBadSignature, kExpired };

inline const char* cert_verdict_name(CertVerdict v) {
  switch (v) {
    case CertVerdict::kOk: return "ok";
    case CertVerdict::kUnknownIssuer: return "unknown_issuer";
    case CertVerdict::kBadSignature: return "bad_signature";
    case CertVerdict::kExpired: return "expired";
  }
  return "?";
}

// The issuer endorses the subject identity and key; validity times are kept
// outside the signed content so clock policy stays a verifier decision.
inline Bytes cert_signing_content(const Certificate& cert) {
  Bytes content = to_bytes(cert.subject_id);
  append(content, view(cert.subject_pubkey));
  return content;
}

inline Certificate issue_certificate(
    const std::string& issuer_id, BytesView issuer_seed,
    const std::string& subject_id,
    const std::array<uint8_t, crypto::kEd25519PublicKeyLen>& subject_pubkey,
    int64_t not_before, int64_t not_after) {
  Certificate cert;
  cert.subject_id = subject_id;
  cert.subject_pubkey = subject_pubkey;
  cert.issuer_id = issuer_id;
  cert.not_before = not_before;
  cert.not_after = not_after;
  cert.signature = crypto::ed25519_sign(issuer_seed, cert_signing_content(cert));
  return cert;
}

inline CertVerdict validate_certificate(const Certificate& cert,
                                        const std::vector<TrustAnchor>& anchors,
                                        int64_t now) {
  const TrustAnchor* anchor = nullptr;
  for (const auto& a : anchors) {
    if (a.issuer_id == cert.issuer_id) {
      anchor = &a;
      break;
    }
  }
  if (anchor == nullptr) return CertVerdict::kUnknownIssuer;
  if (!crypto::ed25519_verify(anchor->pubkey, cert_signing_content(cert),
                              cert.signature))
    return CertVerdict::kBadSignature;
  if (now < cert.not_before || now > cert.not_after) return CertVerdict::kExpired;
  return CertVerdict::kOk;
}

inline Bytes serialize_certificate(const Certificate& cert) {
  Bytes out;
  append_u16be(out, static_cast<uint16_t>(cert.subject_id.size()));
  append(out, to_bytes(cert.subject_id));
  append(out, view(cert.subject_pubkey));
  append_u16be(out, static_cast<uint16_t>(cert.issuer_id.size()));
  append(out, to_bytes(cert.issuer_id));
  append_u64be(out, static_cast<uint64_t>(cert.not_before));
  append_u64be(out, static_cast<uint64_t>(cert.not_after));
  append(out, view(cert.signature));
  return out;
}

inline Certificate parse_certificate(ByteReader& r) {
  Certificate cert;
  size_t subject_len = r.u16be();
  cert.subject_id = to_string(r.take(subject_len));
  auto pk = r.take(crypto::kEd25519PublicKeyLen);
  std::copy(pk.begin(), pk.end(), cert.subject_pubkey.begin());
  size_t issuer_len = r.u16be();
  cert.issuer_id = to_string(r.take(issuer_len));
  cert.not_before = static_cast<int64_t>(r.u64be());
  cert.not_after = static_cast<int64_t>(r.u64be());
  auto sig = r.take(crypto::kEd25519SignatureLen);
  std::copy(sig.begin(), sig.end(), cert.signature.begin());
  return cert;
}

}  // namespace pq5g::handshake
