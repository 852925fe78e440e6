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
#include "pq5g/crypto/aead.hpp"
#include "pq5g/handshake/schedule.hpp"

namespace pq5g::handshake {

enum class ContentType : uint8_t {
  kAlert = 21,
  kHandshake = 22,
  kApplicationData = 23,
};

inline constexpr size_t kRecordHeaderLen = 3;
inline constexpr size_t kMaxRecordBody = 0xffff;

// One direction of record protection. The sequence number is implicit: it
// never travels on the wire and both ends advance it in lockstep.
struct RecordKeys {
  std::array<uint8_t, crypto::kAeadKeyLen> key;
  std::array<uint8_t, crypto::kAeadNonceLen> iv;
  uint64_t seq = 0;
};

inline RecordKeys record_keys_from(const Digest& traffic_secret) {
  RecordKeys k;
  Bytes key = hkdf_expand_label(view(traffic_secret), "key", {}, crypto::kAeadKeyLen);
  Bytes iv = hkdf_expand_label(view(traffic_secret), "iv", {}, crypto::kAeadNonceLen);
  std::copy(key.begin(), key.end(), k.key.begin());
  std::copy(iv.begin(), iv.end(), k.iv.begin());
  return k;
}

inline std::array<uint8_t, crypto::kAeadNonceLen> record_nonce(
    const RecordKeys& keys) {
  auto nonce = keys.iv;
  for (int i = 0; i < 8; i++)
    nonce[nonce.size() - 1 - i] ^= static_cast<uint8_t>(keys.seq >> (8 * i));
  return nonce;
}

inline void bump_sequence(RecordKeys& keys) {
  if (keys.seq == UINT64_MAX)
    throw std::runtime_error("record sequence space exhausted");
  keys.seq++;
}

// Seals one payload under the next sequence number. The caller binds the
// record header by passing it as aad.
inline Bytes record_seal(RecordKeys& keys, BytesView plaintext, BytesView aad) {
  Bytes sealed = crypto::aead_seal(keys.key, record_nonce(keys), aad, plaintext);
  bump_sequence(keys);
  return sealed;
}

// Opens one payload. The sequence number advances only on success; a failed
// record ends the connection anyway.
inline std::optional<Bytes> record_open(RecordKeys& keys, BytesView sealed,
                                        BytesView aad) {
  auto opened = crypto::aead_open(keys.key, record_nonce(keys), aad, sealed);
  if (opened) bump_sequence(keys);
  return opened;
}

inline Bytes record_header(ContentType type, size_t body_len) {
  if (body_len > kMaxRecordBody)
    throw std::invalid_argument("record body too long");
  Bytes h;
  h.push_back(static_cast<uint8_t>(type));
  append_u16be(h, static_cast<uint16_t>(body_len));
  return h;
}

inline Bytes plaintext_record(ContentType type, BytesView body) {
  Bytes out = record_header(type, body.size());
  append(out, body);
  return out;
}

inline Bytes sealed_record(RecordKeys& keys, ContentType type, BytesView plaintext) {
  if (plaintext.size() + crypto::kAeadTagLen > kMaxRecordBody)
    throw std::invalid_argument("record body too long");
  Bytes header = record_header(type, plaintext.size() + crypto::kAeadTagLen);
  Bytes body = record_seal(keys, plaintext, header);
  Bytes out = std::move(header);
  append(out, body);
  return out;
}

struct WireRecord {
  ContentType type;
  BytesView header;  // the 3 bytes, for use as aad
  BytesView body;
};

// Splits a datagram into records. Throws ParseError on an unknown content
// type, a truncated record, or trailing garbage.
inline std::vector<WireRecord> split_records(BytesView datagram) {
  std::vector<WireRecord> records;
  size_t pos = 0;
  while (pos < datagram.size()) {
    if (datagram.size() - pos < kRecordHeaderLen)
      throw ParseError("truncated record header");
    uint8_t t = datagram[pos];
    if (t != static_cast<uint8_t>(ContentType::kAlert) &&
        t != static_cast<uint8_t>(ContentType::kHandshake) &&
        t != static_cast<uint8_t>(ContentType::kApplicationData))
      throw ParseError("unknown record content type");
    size_t len = read_u16be(datagram, pos + 1);
    if (datagram.size() - pos - kRecordHeaderLen < len)
      throw ParseError("truncated record body");
    records.push_back(WireRecord{static_cast<ContentType>(t),
                                 datagram.subspan(pos, kRecordHeaderLen),
                                 datagram.subspan(pos + kRecordHeaderLen, len)});
    pos += kRecordHeaderLen + len;
  }
  return records;
}

}  // namespace pq5g::handshake
