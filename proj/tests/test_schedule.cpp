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

#include <set>

#include "pq5g/handshake/schedule.hpp"
#include "test_util.hpp"

using namespace pq5g;
using namespace pq5g::handshake;

namespace {

// Independent re-derivation of the ladder using only the raw HKDF calls, to
// pin the extract/expand structure against an oracle that shares no code
// with KeySchedule::derive.
Bytes oracle_expand_label(BytesView secret, const std::string& label,
                          BytesView context, uint16_t length) {
  Bytes info;
  info.push_back(static_cast<uint8_t>(length >> 8));
  info.push_back(static_cast<uint8_t>(length & 0xff));
  std::string full = "tls13 " + label;
  info.push_back(static_cast<uint8_t>(full.size()));
  for (char c : full) info.push_back(static_cast<uint8_t>(c));
  info.push_back(static_cast<uint8_t>(context.size()));
  info.insert(info.end(), context.begin(), context.end());
  return crypto::hkdf_expand(secret, view(info), length);
}

}  // namespace

TEST_CASE("hkdf_expand_label builds the rfc 8446 info structure",
          "[schedule]") {
  Bytes secret = from_hex(
      "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
  Bytes ctx = from_hex("a0a1a2a3");

  Bytes got = hkdf_expand_label(view(secret), "c hs traffic", view(ctx), 32);
  Bytes want = oracle_expand_label(view(secret), "c hs traffic", view(ctx), 32);
  CHECK(got == want);

  // Empty context and a non-digest output length.
  got = hkdf_expand_label(view(secret), "key", {}, 16);
  want = oracle_expand_label(view(secret), "key", {}, 16);
  CHECK(got == want);
  CHECK(got.size() == 16);

  CHECK_THROWS_AS(
      hkdf_expand_label(view(secret), std::string(256, 'x'), {}, 32),
      std::invalid_argument);
  Bytes big(256, 0);
  CHECK_THROWS_AS(hkdf_expand_label(view(secret), "iv", view(big), 32),
                  std::invalid_argument);
}

TEST_CASE("key schedule matches an independent hkdf derivation", "[schedule]") {
  Bytes ikm = from_hex(
      "202122232425262728292a2b2c2d2e2f303132333435363738393a3b3c3d3e3f");
  Digest hello_hash = crypto::sha256(view(testutil::ascii("hello transcript")));
  Digest finished_hash =
      crypto::sha256(view(testutil::ascii("finished transcript")));

  KeySchedule s = KeySchedule::derive(view(ikm), hello_hash);
  s.complete(finished_hash);

  // Oracle ladder per RFC 8446 section 7.1 with PSK = 0 and SHA-256.
  Bytes zeros(32, 0);
  Digest empty_hash = crypto::sha256({});
  auto early = crypto::hkdf_extract(view(zeros), view(zeros));
  Bytes derived =
      oracle_expand_label(view(early), "derived", view(empty_hash), 32);
  auto hs = crypto::hkdf_extract(view(derived), view(ikm));
  Bytes c_hs =
      oracle_expand_label(view(hs), "c hs traffic", view(hello_hash), 32);
  Bytes s_hs =
      oracle_expand_label(view(hs), "s hs traffic", view(hello_hash), 32);
  derived = oracle_expand_label(view(hs), "derived", view(empty_hash), 32);
  auto master = crypto::hkdf_extract(view(derived), view(zeros));
  Bytes c_ap =
      oracle_expand_label(view(master), "c ap traffic", view(finished_hash), 32);
  Bytes s_ap =
      oracle_expand_label(view(master), "s ap traffic", view(finished_hash), 32);

  CHECK(testutil::eq(view(s.early_secret), view(early)));
  CHECK(testutil::eq(view(s.handshake_secret), view(hs)));
  CHECK(testutil::eq(view(s.client_hs_secret), view(c_hs)));
  CHECK(testutil::eq(view(s.server_hs_secret), view(s_hs)));
  CHECK(testutil::eq(view(s.master_secret), view(master)));
  REQUIRE(s.client_app_secret.has_value());
  REQUIRE(s.server_app_secret.has_value());
  CHECK(testutil::eq(view(*s.client_app_secret), view(c_ap)));
  CHECK(testutil::eq(view(*s.server_app_secret), view(s_ap)));
}

TEST_CASE("all derived secrets are pairwise distinct", "[schedule]") {
  Bytes ikm(32, 0x42);
  Digest hello_hash = crypto::sha256(view(testutil::ascii("h1")));
  KeySchedule s = KeySchedule::derive(view(ikm), hello_hash);
  s.complete(crypto::sha256(view(testutil::ascii("h2"))));

  std::set<std::string> uniq;
  for (const Digest& d :
       {s.early_secret, s.handshake_secret, s.master_secret,
        s.client_hs_secret, s.server_hs_secret, *s.client_app_secret,
        *s.server_app_secret}) {
    uniq.insert(to_hex(view(d)));
  }
  CHECK(uniq.size() == 7);
}

TEST_CASE("schedule is a pure function of ikm and transcripts", "[schedule]") {
  Bytes ikm1(32, 0x01);
  Bytes ikm2(32, 0x02);
  Digest h1 = crypto::sha256(view(testutil::ascii("t1")));
  Digest h2 = crypto::sha256(view(testutil::ascii("t2")));

  KeySchedule a = KeySchedule::derive(view(ikm1), h1);
  KeySchedule b = KeySchedule::derive(view(ikm1), h1);
  CHECK(a.client_hs_secret == b.client_hs_secret);
  CHECK(a.server_hs_secret == b.server_hs_secret);

  KeySchedule c = KeySchedule::derive(view(ikm2), h1);
  CHECK(a.client_hs_secret != c.client_hs_secret);

  KeySchedule d = KeySchedule::derive(view(ikm1), h2);
  CHECK(a.client_hs_secret != d.client_hs_secret);

  // Completing with different finished hashes forks the app secrets but not
  // the handshake secrets.
  a.complete(h1);
  b.complete(h2);
  CHECK(*a.client_app_secret != *b.client_app_secret);
  CHECK(a.master_secret == b.master_secret);
}

TEST_CASE("finished verify data binds key and transcript", "[schedule]") {
  Digest secret = crypto::sha256(view(testutil::ascii("traffic")));
  Digest hash1 = crypto::sha256(view(testutil::ascii("msg a")));
  Digest hash2 = crypto::sha256(view(testutil::ascii("msg b")));

  Digest v1 = finished_verify_data(secret, hash1);
  CHECK(v1 == finished_verify_data(secret, hash1));
  CHECK(v1 != finished_verify_data(secret, hash2));

  Digest other = crypto::sha256(view(testutil::ascii("other traffic")));
  CHECK(v1 != finished_verify_data(other, hash1));

  // The finished key is itself a labeled expansion of the traffic secret.
  Digest fk = finished_key(secret);
  Bytes want = oracle_expand_label(view(secret), "finished", {}, 32);
  CHECK(testutil::eq(view(fk), view(want)));
  CHECK(v1 == crypto::hmac_sha256(view(fk), view(hash1)));
}
