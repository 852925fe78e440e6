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

#include "pq5g/kem/mlkem.hpp"
#include "pq5g/rng.hpp"
#include "test_util.hpp"

using namespace pq5g;
using namespace pq5g::kem;

namespace {

// Independent implicit-rejection oracle: K-bar = SHAKE256(z || ct, 32),
// with z the last 32 bytes of the decapsulation key.
SharedSecret rejection_secret(const DecapsKey& dk, const KemCiphertext& ct) {
  Bytes input(dk.bytes.end() - 32, dk.bytes.end());
  append(input, view(ct.bytes));
  Bytes out = crypto::shake256(view(input), 32);
  SharedSecret ss;
  std::copy(out.begin(), out.end(), ss.begin());
  return ss;
}

}  // namespace

TEST_CASE("round-trip agreement at every level", "[mlkem]") {
  DeterministicRandom rng(201, "kem-rt");
  for (int level : {512, 768, 1024}) {
    const KemParams& p = KemParams::for_level(level);
    for (int t = 0; t < 25; t++) {
      auto [ek, dk] = keygen(p, rng);
      REQUIRE(ek.bytes.size() == p.ek_len);
      REQUIRE(dk.bytes.size() == p.dk_len);
      auto [ct, ss] = encaps(ek, rng);
      REQUIRE(ct.bytes.size() == p.ct_len);
      SharedSecret dec = decaps(dk, ct);
      REQUIRE(ss == dec);
    }
  }
}

TEST_CASE("keygen and encaps are deterministic under fixed seeds", "[mlkem]") {
  const KemParams& p = KemParams::for_level(768);
  DeterministicRandom rng(202, "kem-det");
  Bytes seed = rng.bytes(64);
  Bytes m = rng.bytes(32);
  auto [ek1, dk1] = keygen(p, view(seed));
  auto [ek2, dk2] = keygen(p, view(seed));
  CHECK(ek1.bytes == ek2.bytes);
  CHECK(dk1.bytes == dk2.bytes);
  auto [ct1, ss1] = encaps(ek1, view(m));
  auto [ct2, ss2] = encaps(ek2, view(m));
  CHECK(ct1.bytes == ct2.bytes);
  CHECK(ss1 == ss2);
}

TEST_CASE("corrupted ciphertext lands on the implicit-rejection secret",
          "[mlkem]") {
  DeterministicRandom rng(203, "kem-rej");
  for (int level : {512, 768, 1024}) {
    const KemParams& p = KemParams::for_level(level);
    auto [ek, dk] = keygen(p, rng);
    auto [ct, ss] = encaps(ek, rng);
    for (int t = 0; t < 20; t++) {
      KemCiphertext bad = ct;
      size_t pos = rng.bytes(2)[0] * 256 + rng.bytes(1)[0];
      pos %= bad.bytes.size();
      uint8_t delta = static_cast<uint8_t>(1 + rng.bytes(1)[0] % 255);
      bad.bytes[pos] ^= delta;
      SharedSecret got = decaps(dk, bad);
      SharedSecret expected = rejection_secret(dk, bad);
      REQUIRE(got == expected);
      REQUIRE(got != ss);
    }
  }
}

TEST_CASE("decapsulation key embeds ek and H(ek)", "[mlkem]") {
  const KemParams& p = KemParams::for_level(512);
  DeterministicRandom rng(204, "kem-layout");
  auto [ek, dk] = keygen(p, rng);
  size_t pke_len = p.ek_len - 32;  // dk_PKE is 384k bytes
  BytesView embedded_ek(dk.bytes.data() + pke_len, p.ek_len);
  CHECK(Bytes(embedded_ek.begin(), embedded_ek.end()) == ek.bytes);
  auto h = crypto::sha3_256(view(ek.bytes));
  BytesView embedded_h(dk.bytes.data() + pke_len + p.ek_len, 32);
  CHECK(testutil::eq(view(h), embedded_h));
}

TEST_CASE("encapsulation enforces key length and modulus", "[mlkem]") {
  const KemParams& p = KemParams::for_level(768);
  DeterministicRandom rng(205, "kem-check");
  auto [ek, dk] = keygen(p, rng);

  EncapsKey short_ek = ek;
  short_ek.bytes.pop_back();
  CHECK_THROWS_AS(encaps(short_ek, rng), std::invalid_argument);

  // Force the first 12-bit coefficient to q (unreduced but in range 2^12).
  EncapsKey bad_ek = ek;
  bad_ek.bytes[0] = static_cast<uint8_t>(kPrime & 0xff);
  bad_ek.bytes[1] = static_cast<uint8_t>((bad_ek.bytes[1] & 0xf0) |
                                         ((kPrime >> 8) & 0x0f));
  CHECK_THROWS_AS(encaps(bad_ek, rng), std::invalid_argument);

  Bytes m31(31, 0);
  CHECK_THROWS_AS(encaps(ek, view(m31)), std::invalid_argument);
}

TEST_CASE("decapsulation validates lengths and level", "[mlkem]") {
  DeterministicRandom rng(206, "kem-dec-check");
  auto [ek, dk] = keygen(KemParams::for_level(512), rng);
  auto [ct, ss] = encaps(ek, rng);

  KemCiphertext trunc = ct;
  trunc.bytes.pop_back();
  CHECK_THROWS_AS(decaps(dk, trunc), std::invalid_argument);

  KemCiphertext wrong_level = ct;
  wrong_level.level = 768;
  CHECK_THROWS_AS(decaps(dk, wrong_level), std::invalid_argument);
}

TEST_CASE("distinct keypairs disagree", "[mlkem]") {
  DeterministicRandom rng(207, "kem-distinct");
  const KemParams& p = KemParams::for_level(768);
  auto [ek1, dk1] = keygen(p, rng);
  auto [ek2, dk2] = keygen(p, rng);
  CHECK(ek1.bytes != ek2.bytes);
  auto [ct, ss] = encaps(ek1, rng);
  SharedSecret other = decaps(dk2, ct);  // implicit rejection path
  CHECK(other != ss);
}

TEST_CASE("parameter table matches the standard sizes", "[mlkem]") {
  struct Row {
    int level, k, eta1, eta2, du, dv;
    size_t ek, dk, ct;
  };
  for (const Row& r : {Row{512, 2, 3, 2, 10, 4, 800, 1632, 768},
                       Row{768, 3, 2, 2, 10, 4, 1184, 2400, 1088},
                       Row{1024, 4, 2, 2, 11, 5, 1568, 3168, 1568}}) {
    const KemParams& p = KemParams::for_level(r.level);
    CHECK(p.k == r.k);
    CHECK(p.eta1 == r.eta1);
    CHECK(p.eta2 == r.eta2);
    CHECK(p.du == r.du);
    CHECK(p.dv == r.dv);
    CHECK(p.ek_len == r.ek);
    CHECK(p.dk_len == r.dk);
    CHECK(p.ct_len == r.ct);
  }
  CHECK_THROWS_AS(KemParams::for_level(640), std::invalid_argument);
}

TEST_CASE("mode wire bytes round-trip", "[mlkem]") {
  for (int level : {512, 768, 1024}) {
    for (bool hybrid : {false, true}) {
      KemMode m{level, hybrid};
      auto back = KemMode::from_wire(m.wire_byte());
      REQUIRE(back.has_value());
      CHECK(*back == m);
    }
  }
  CHECK_FALSE(KemMode::from_wire(0x00).has_value());
  CHECK_FALSE(KemMode::from_wire(0x04).has_value());
  CHECK_FALSE(KemMode::from_wire(0x7f).has_value());
  CHECK(KemMode{768, true}.wire_byte() == 0x82);
  CHECK(KemMode{512, false}.wire_byte() == 0x01);
}
