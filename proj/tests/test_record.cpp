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

#include <catch2/catch_amalgamated.hpp>

#include "pq5g/handshake/record.hpp"
#include "test_util.hpp"

using namespace pq5g;
using namespace pq5g::handshake;

namespace {

RecordKeys test_keys() {
  Digest secret = crypto::sha256(view(testutil::ascii("record test secret")));
  return record_keys_from(secret);
}

}  // namespace

TEST_CASE("traffic keys derive from the secret via labeled expansion",
          "[record]") {
  Digest secret = crypto::sha256(view(testutil::ascii("derivation check")));
  RecordKeys k = record_keys_from(secret);

  Bytes want_key = hkdf_expand_label(view(secret), "key", {}, crypto::kAeadKeyLen);
  Bytes want_iv = hkdf_expand_label(view(secret), "iv", {}, crypto::kAeadNonceLen);
  CHECK(testutil::eq(view(k.key), view(want_key)));
  CHECK(testutil::eq(view(k.iv), view(want_iv)));
  CHECK(k.seq == 0);

  Digest other = crypto::sha256(view(testutil::ascii("another secret")));
  RecordKeys k2 = record_keys_from(other);
  CHECK(k.key != k2.key);
  CHECK(k.iv != k2.iv);
}

TEST_CASE("nonce is the iv xored with the big-endian sequence", "[record]") {
  RecordKeys k = test_keys();
  CHECK(record_nonce(k) == k.iv);

  k.seq = 1;
  auto n1 = record_nonce(k);
  auto want = k.iv;
  want[11] ^= 0x01;
  CHECK(n1 == want);

  k.seq = 0x0123456789abcdefULL;
  auto n2 = record_nonce(k);
  want = k.iv;
  uint8_t pattern[8] = {0x01, 0x23, 0x45, 0x67, 0x89, 0xab, 0xcd, 0xef};
  for (int i = 0; i < 8; i++) want[4 + i] ^= pattern[i];
  CHECK(n2 == want);
}

TEST_CASE("seal and open round-trip and advance the sequence together",
          "[record]") {
  RecordKeys tx = test_keys();
  RecordKeys rx = test_keys();
  Bytes aad = from_hex("170020");

  for (int i = 0; i < 5; i++) {
    Bytes pt = testutil::ascii("message " + std::to_string(i));
    Bytes sealed = record_seal(tx, view(pt), view(aad));
    CHECK(sealed.size() == pt.size() + crypto::kAeadTagLen);
    auto opened = record_open(rx, view(sealed), view(aad));
    REQUIRE(opened.has_value());
    CHECK(*opened == pt);
  }
  CHECK(tx.seq == 5);
  CHECK(rx.seq == 5);
}

TEST_CASE("identical plaintexts seal differently under consecutive sequences",
          "[record]") {
  RecordKeys tx = test_keys();
  Bytes pt = testutil::ascii("same bytes");
  Bytes s1 = record_seal(tx, view(pt), {});
  Bytes s2 = record_seal(tx, view(pt), {});
  CHECK(s1 != s2);
}

TEST_CASE("a skipped or replayed sequence fails to open", "[record]") {
  RecordKeys tx = test_keys();
  RecordKeys rx = test_keys();
  Bytes pt = testutil::ascii("payload");

  Bytes first = record_seal(tx, view(pt), {});
  Bytes second = record_seal(tx, view(pt), {});

  // Receiver expects seq 0; the record sealed under seq 1 must not open.
  CHECK_FALSE(record_open(rx, view(second), {}).has_value());
  // Failure does not advance the receiver sequence.
  CHECK(rx.seq == 0);
  REQUIRE(record_open(rx, view(first), {}).has_value());
  // Replay of the already-consumed record fails against seq 1.
  CHECK_FALSE(record_open(rx, view(first), {}).has_value());
  REQUIRE(record_open(rx, view(second), {}).has_value());
}

TEST_CASE("aad binds the record header", "[record]") {
  RecordKeys tx = test_keys();
  RecordKeys rx = test_keys();
  Bytes pt = testutil::ascii("bound to header");
  Bytes aad = from_hex("17001f");
  Bytes sealed = record_seal(tx, view(pt), view(aad));

  Bytes flipped = from_hex("16001f");
  CHECK_FALSE(record_open(rx, view(sealed), view(flipped)).has_value());
  CHECK(record_open(rx, view(sealed), view(aad)).has_value());
}

TEST_CASE("sealed_record emits header plus ciphertext bound as aad",
          "[record]") {
  RecordKeys tx = test_keys();
  Bytes pt = testutil::ascii("application bytes");
  Bytes rec = sealed_record(tx, ContentType::kApplicationData, view(pt));

  REQUIRE(rec.size() == kRecordHeaderLen + pt.size() + crypto::kAeadTagLen);
  CHECK(rec[0] == 23);
  CHECK(read_u16be(view(rec), 1) == pt.size() + crypto::kAeadTagLen);

  auto records = split_records(view(rec));
  REQUIRE(records.size() == 1);
  CHECK(records[0].type == ContentType::kApplicationData);

  RecordKeys rx = test_keys();
  auto opened = record_open(rx, records[0].body, records[0].header);
  REQUIRE(opened.has_value());
  CHECK(*opened == pt);
}

TEST_CASE("plaintext_record wire layout", "[record]") {
  Bytes body = from_hex("0a0b0c");
  Bytes rec = plaintext_record(ContentType::kHandshake, view(body));
  CHECK(to_hex(view(rec)) == "1600030a0b0c");
  Bytes alert = plaintext_record(ContentType::kAlert, view(from_hex("0228")));
  CHECK(to_hex(view(alert)) == "1500020228");
}

TEST_CASE("split_records walks multiple records and rejects damage",
          "[record]") {
  Bytes wire = plaintext_record(ContentType::kHandshake, view(from_hex("01")));
  append(wire, view(plaintext_record(ContentType::kAlert, view(from_hex("0232")))));
  append(wire, view(plaintext_record(ContentType::kApplicationData, {})));

  auto records = split_records(view(wire));
  REQUIRE(records.size() == 3);
  CHECK(records[0].type == ContentType::kHandshake);
  CHECK(records[1].type == ContentType::kAlert);
  CHECK(records[2].type == ContentType::kApplicationData);
  CHECK(records[2].body.empty());
  CHECK(testutil::eq(records[1].body, view(from_hex("0232"))));

  SECTION("unknown content type") {
    Bytes bad = wire;
    bad[0] = 0x14;
    CHECK_THROWS_AS(split_records(view(bad)), ParseError);
  }
  SECTION("truncated header") {
    Bytes bad(wire.begin(), wire.begin() + wire.size() - 2);
    // Cut inside the final record's header.
    bad.resize(wire.size() - 4);
    CHECK_THROWS_AS(split_records(view(bad)), ParseError);
  }
  SECTION("truncated body") {
    Bytes bad = wire;
    bad.pop_back();
    // Now the alert record claims 2 bytes but the tail shifted; reparse the
    // exact failure by cutting the first record instead.
    Bytes cut(wire.begin(), wire.begin() + 3);
    CHECK_THROWS_AS(split_records(view(cut)), ParseError);
  }
  SECTION("length overrun") {
    Bytes bad = plaintext_record(ContentType::kHandshake, view(from_hex("01")));
    bad[2] = 0x09;
    CHECK_THROWS_AS(split_records(view(bad)), ParseError);
  }
  SECTION("empty input yields no records") {
    CHECK(split_records({}).empty());
  }
}

TEST_CASE("oversized bodies are refused before sealing", "[record]") {
  RecordKeys tx = test_keys();
  Bytes big(kMaxRecordBody - crypto::kAeadTagLen + 1, 0);
  CHECK_THROWS_AS(sealed_record(tx, ContentType::kApplicationData, view(big)),
                  std::invalid_argument);
  CHECK_THROWS_AS(record_header(ContentType::kAlert, kMaxRecordBody + 1),
                  std::invalid_argument);
}

TEST_CASE("sequence exhaustion is detected", "[record]") {
  RecordKeys tx = test_keys();
  tx.seq = UINT64_MAX;
  CHECK_THROWS(record_seal(tx, view(testutil::ascii("x")), {}));
}
