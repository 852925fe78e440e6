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

#include <utility>
#include <vector>

#include "pq5g/bytes.hpp"
#include "pq5g/keccak.hpp"
#include "pq5g/kem/params.hpp"
#include "pq5g/kem/poly.hpp"
#include "pq5g/rng.hpp"

namespace pq5g::kem {

struct EncapsKey {
  int level;
  Bytes bytes;
};

struct DecapsKey {
  int level;
  Bytes bytes;
};

struct KemCiphertext {
  int level;
  Bytes bytes;
};

using SharedSecret = std::array<uint8_t, KemParams::kSharedSecretLen>;

namespace mlkem_impl {

inline Bytes prf(int eta, BytesView seed32, uint8_t counter) {
  crypto::Keccak xof(crypto::Keccak::Kind::kShake256);
  xof.absorb(seed32);
  uint8_t c = counter;
  xof.absorb(BytesView(&c, 1));
  return xof.squeeze(static_cast<size_t>(64 * eta));
}

// A[i][j] in the NTT domain, derived from rho with the row index absorbed
// before the column index.
inline std::vector<std::vector<Poly>> expand_matrix(BytesView rho, int k) {
  std::vector<std::vector<Poly>> a(static_cast<size_t>(k));
  for (int i = 0; i < k; i++) {
    a[i].reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; j++) {
      crypto::Keccak xof(crypto::Keccak::Kind::kShake128);
      xof.absorb(rho);
      uint8_t idx[2] = {static_cast<uint8_t>(i), static_cast<uint8_t>(j)};
      xof.absorb(BytesView(idx, 2));
      a[i].push_back(sample_ntt(xof));
    }
  }
  return a;
}

struct PkeKeyPair {
  Bytes ek;      // byte_encode(12, t_hat) || rho
  Bytes dk_pke;  // byte_encode(12, s_hat)
};

inline PkeKeyPair pke_keygen(const KemParams& p, BytesView d32) {
  Bytes input(d32.begin(), d32.end());
  input.push_back(static_cast<uint8_t>(p.k));
  auto g = crypto::sha3_512(input);
  BytesView rho(g.data(), 32), sigma(g.data() + 32, 32);

  auto a = expand_matrix(rho, p.k);
  uint8_t n = 0;
  std::vector<Poly> s_hat, e_hat;
  for (int i = 0; i < p.k; i++) s_hat.push_back(ntt(sample_cbd(p.eta1, prf(p.eta1, sigma, n++))));
  for (int i = 0; i < p.k; i++) e_hat.push_back(ntt(sample_cbd(p.eta1, prf(p.eta1, sigma, n++))));

  PkeKeyPair out;
  for (int i = 0; i < p.k; i++) {
    Poly t = e_hat[i];
    for (int j = 0; j < p.k; j++) t = poly_add(t, ntt_multiply(a[j][i], s_hat[j]));
    append(out.ek, poly_encode(12, t));
  }
  append(out.ek, rho);
  for (int i = 0; i < p.k; i++) append(out.dk_pke, poly_encode(12, s_hat[i]));
  return out;
}

inline Bytes pke_encrypt(const KemParams& p, BytesView ek, BytesView m32,
                         BytesView r32) {
  std::vector<Poly> t_hat;
  for (int i = 0; i < p.k; i++)
    t_hat.push_back(*poly_decode(12, ek.subspan(static_cast<size_t>(384 * i), 384), false));
  BytesView rho = ek.subspan(static_cast<size_t>(384 * p.k), 32);
  auto a = expand_matrix(rho, p.k);

  uint8_t n = 0;
  std::vector<Poly> y_hat;
  for (int i = 0; i < p.k; i++) y_hat.push_back(ntt(sample_cbd(p.eta1, prf(p.eta1, r32, n++))));
  std::vector<Poly> e1;
  for (int i = 0; i < p.k; i++) e1.push_back(sample_cbd(p.eta2, prf(p.eta2, r32, n++)));
  Poly e2 = sample_cbd(p.eta2, prf(p.eta2, r32, n));

  Bytes out;
  for (int i = 0; i < p.k; i++) {
    Poly acc{};
    for (int j = 0; j < p.k; j++) acc = poly_add(acc, ntt_multiply(a[i][j], y_hat[j]));
    Poly u = poly_add(inverse_ntt(acc), e1[i]);
    append(out, poly_encode(p.du, poly_compress(p.du, u)));
  }
  Poly acc{};
  for (int j = 0; j < p.k; j++) acc = poly_add(acc, ntt_multiply(t_hat[j], y_hat[j]));
  Poly mu = poly_decompress(1, *poly_decode(1, m32, false));
  Poly v = poly_add(poly_add(inverse_ntt(acc), e2), mu);
  append(out, poly_encode(p.dv, poly_compress(p.dv, v)));
  return out;
}

inline Bytes pke_decrypt(const KemParams& p, BytesView dk_pke, BytesView ct) {
  size_t step = static_cast<size_t>(32 * p.du);
  Poly acc{};
  for (int i = 0; i < p.k; i++) {
    Poly u = poly_decompress(p.du, *poly_decode(p.du, ct.subspan(i * step, step), false));
    Poly s = *poly_decode(12, dk_pke.subspan(static_cast<size_t>(384 * i), 384), false);
    acc = poly_add(acc, ntt_multiply(s, ntt(u)));
  }
  Poly v = poly_decompress(
      p.dv,
      *poly_decode(p.dv, ct.subspan(static_cast<size_t>(p.k) * step), false));
  Poly w = poly_sub(v, inverse_ntt(acc));
  return poly_encode(1, poly_compress(1, w));
}

}  // namespace mlkem_impl

// Deterministic key generation from a 64-byte seed d || z.
inline std::pair<EncapsKey, DecapsKey> keygen(const KemParams& p, BytesView seed) {
  if (seed.size() != KemParams::kSeedLen)
    throw std::invalid_argument("keygen: seed must be 64 bytes");
  auto pke = mlkem_impl::pke_keygen(p, seed.subspan(0, 32));
  auto h = crypto::sha3_256(pke.ek);
  DecapsKey dk{p.level, {}};
  dk.bytes = concat({view(pke.dk_pke), view(pke.ek), view(h), seed.subspan(32, 32)});
  return {EncapsKey{p.level, std::move(pke.ek)}, std::move(dk)};
}

inline std::pair<EncapsKey, DecapsKey> keygen(const KemParams& p, RandomSource& rng) {
  return keygen(p, rng.bytes(KemParams::kSeedLen));
}

// Encapsulation with caller-supplied message randomness. Rejects keys with
// the wrong length or with any 12-bit coefficient group outside [0, q).
inline std::pair<KemCiphertext, SharedSecret> encaps(const EncapsKey& ek,
                                                     BytesView m) {
  const KemParams& p = KemParams::for_level(ek.level);
  if (ek.bytes.size() != p.ek_len)
    throw std::invalid_argument("encaps: encapsulation key has wrong length");
  if (m.size() != KemParams::kMessageLen)
    throw std::invalid_argument("encaps: message must be 32 bytes");
  for (int i = 0; i < p.k; i++) {
    if (!poly_decode(12, BytesView(ek.bytes).subspan(static_cast<size_t>(384 * i), 384),
                     true))
      throw std::invalid_argument("encaps: encapsulation key failed modulus check");
  }
  auto g = crypto::sha3_512(concat({m, view(crypto::sha3_256(ek.bytes))}));
  SharedSecret ss;
  std::copy(g.begin(), g.begin() + 32, ss.begin());
  Bytes ct = mlkem_impl::pke_encrypt(p, ek.bytes, m, BytesView(g.data() + 32, 32));
  return {KemCiphertext{p.level, std::move(ct)}, ss};
}

inline std::pair<KemCiphertext, SharedSecret> encaps(const EncapsKey& ek,
                                                     RandomSource& rng) {
  return encaps(ek, rng.bytes(KemParams::kMessageLen));
}

// Decapsulation never reports failure for well-formed inputs: a ciphertext
// that fails re-encryption yields the implicit-rejection value derived from
// z and the ciphertext.
inline SharedSecret decaps(const DecapsKey& dk, const KemCiphertext& ct) {
  const KemParams& p = KemParams::for_level(dk.level);
  if (dk.level != ct.level)
    throw std::invalid_argument("decaps: key and ciphertext level mismatch");
  if (dk.bytes.size() != p.dk_len)
    throw std::invalid_argument("decaps: decapsulation key has wrong length");
  if (ct.bytes.size() != p.ct_len)
    throw std::invalid_argument("decaps: ciphertext has wrong length");

  BytesView dkv(dk.bytes);
  BytesView dk_pke = dkv.subspan(0, static_cast<size_t>(384 * p.k));
  BytesView ek = dkv.subspan(static_cast<size_t>(384 * p.k), p.ek_len);
  BytesView h = dkv.subspan(static_cast<size_t>(768 * p.k) + 32, 32);
  BytesView z = dkv.subspan(static_cast<size_t>(768 * p.k) + 64, 32);

  Bytes m2 = mlkem_impl::pke_decrypt(p, dk_pke, ct.bytes);
  auto g = crypto::sha3_512(concat({view(m2), h}));
  crypto::Keccak rej(crypto::Keccak::Kind::kShake256);
  rej.absorb(z);
  rej.absorb(ct.bytes);
  SharedSecret kbar;
  rej.squeeze(kbar.data(), kbar.size());

  Bytes ct2 = mlkem_impl::pke_encrypt(p, ek, m2, BytesView(g.data() + 32, 32));
  SharedSecret ss;
  bool ok = ct_equal(ct2, ct.bytes);
  for (size_t i = 0; i < ss.size(); i++) ss[i] = ok ? g[i] : kbar[i];
  return ss;
}

}  // namespace pq5g::kem
