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
#include <string_view>

#include "pq5g/bytes.hpp"
#include "pq5g/crypto/hkdf.hpp"
#include "pq5g/crypto/sha256.hpp"

namespace pq5g::handshake {

using Digest = std::array<uint8_t, crypto::kSha256Len>;

// HKDF-Expand with the structured label of RFC 8446 section 7.1.
inline Bytes hkdf_expand_label(BytesView secret, std::string_view label,
                               BytesView context, uint16_t length) {
  std::string full_label = "tls13 ";
  full_label += label;
  if (full_label.size() > 255 || context.size() > 255)
    throw std::invalid_argument("hkdf_expand_label: label or context too long");
  Bytes info;
  append_u16be(info, length);
  info.push_back(static_cast<uint8_t>(full_label.size()));
  append(info, to_bytes(full_label));
  info.push_back(static_cast<uint8_t>(context.size()));
  append(info, context);
  return crypto::hkdf_expand(secret, info, length);
}

inline Digest expand_label32(BytesView secret, std::string_view label,
                             BytesView context) {
  Bytes b = hkdf_expand_label(secret, label, context, crypto::kSha256Len);
  Digest out;
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

// The extract/expand ladder. Both sides must feed it the same input keying
// material and transcript hashes to end up with equal traffic secrets; the
// equality of independently derived schedules is the handshake's core
// correctness property.
struct KeySchedule {
  Digest early_secret;
  Digest handshake_secret;
  Digest master_secret;
  Digest client_hs_secret;
  Digest server_hs_secret;
  std::optional<Digest> client_app_secret;
  std::optional<Digest> server_app_secret;

  // ikm: combined shared secret. hello_hash: transcript through ServerHello.
  static KeySchedule derive(BytesView ikm, const Digest& hello_hash) {
    static const Bytes kZeros(crypto::kSha256Len, 0);
    const Digest empty_hash = crypto::sha256({});
    KeySchedule s;
    s.early_secret = crypto::hkdf_extract(kZeros, kZeros);
    Digest derived = expand_label32(view(s.early_secret), "derived", view(empty_hash));
    s.handshake_secret = crypto::hkdf_extract(view(derived), ikm);
    s.client_hs_secret =
        expand_label32(view(s.handshake_secret), "c hs traffic", view(hello_hash));
    s.server_hs_secret =
        expand_label32(view(s.handshake_secret), "s hs traffic", view(hello_hash));
    derived = expand_label32(view(s.handshake_secret), "derived", view(empty_hash));
    s.master_secret = crypto::hkdf_extract(view(derived), kZeros);
    return s;
  }

  // finished_hash: transcript through the server Finished message.
  void complete(const Digest& finished_hash) {
    client_app_secret =
        expand_label32(view(master_secret), "c ap traffic", view(finished_hash));
    server_app_secret =
        expand_label32(view(master_secret), "s ap traffic", view(finished_hash));
  }
};

inline Digest finished_key(const Digest& traffic_secret) {
  return expand_label32(view(traffic_secret), "finished", {});
}

inline Digest finished_verify_data(const Digest& traffic_secret,
                                   const Digest& transcript_hash) {
  return crypto::hmac_sha256(view(finished_key(traffic_secret)),
                             view(transcript_hash));
}

}  // namespace pq5g::handshake
