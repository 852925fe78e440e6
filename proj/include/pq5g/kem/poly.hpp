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

#include "pq5g/bytes.hpp"
#include "pq5g/keccak.hpp"

namespace pq5g::kem {

inline constexpr uint16_t kPrime = 3329;
inline constexpr int kDegree = 256;

// Elements of Z_q[X]/(X^256 + 1), coefficients kept reduced in [0, q).
struct Poly {
  std::array<uint16_t, kDegree> c{};
  bool operator==(const Poly&) const = default;
};

namespace poly_impl {

constexpr uint16_t mod_mul(uint32_t a, uint32_t b) {
  return static_cast<uint16_t>(a * b % kPrime);
}

constexpr uint16_t mod_pow(uint16_t base, uint32_t exp) {
  uint16_t acc = 1;
  uint16_t b = base;
  while (exp != 0) {
    if (exp & 1) acc = mod_mul(acc, b);
    b = mod_mul(b, b);
    exp >>= 1;
  }
  return acc;
}

constexpr int bitrev7(int i) {
  int r = 0;
  for (int bit = 0; bit < 7; bit++) {
    r = r << 1 | (i >> bit & 1);
  }
  return r;
}

// 17 generates the group of 256th roots of unity used by the incomplete NTT.
constexpr std::array<uint16_t, 128> make_zetas() {
  std::array<uint16_t, 128> z{};
  for (int i = 0; i < 128; i++) z[i] = mod_pow(17, static_cast<uint32_t>(bitrev7(i)));
  return z;
}

// Odd powers pairing each degree-one residue with its X^2 - gamma modulus.
constexpr std::array<uint16_t, 128> make_gammas() {
  std::array<uint16_t, 128> g{};
  for (int i = 0; i < 128; i++)
    g[i] = mod_pow(17, static_cast<uint32_t>(2 * bitrev7(i) + 1));
  return g;
}

inline constexpr std::array<uint16_t, 128> kZetas = make_zetas();
inline constexpr std::array<uint16_t, 128> kGammas = make_gammas();

// 128^-1 mod q, applied once on the way out of the inverse transform.
inline constexpr uint16_t kInverse128 = mod_pow(128, kPrime - 2);

}  // namespace poly_impl

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r;
  for (int i = 0; i < kDegree; i++)
    r.c[i] = static_cast<uint16_t>((a.c[i] + b.c[i]) % kPrime);
  return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r;
  for (int i = 0; i < kDegree; i++)
    r.c[i] = static_cast<uint16_t>((a.c[i] + kPrime - b.c[i]) % kPrime);
  return r;
}

inline Poly ntt(Poly f) {
  using poly_impl::mod_mul;
  int zi = 1;
  for (int len = 128; len >= 2; len >>= 1) {
    for (int start = 0; start < kDegree; start += 2 * len) {
      uint16_t zeta = poly_impl::kZetas[zi++];
      for (int j = start; j < start + len; j++) {
        uint16_t t = mod_mul(zeta, f.c[j + len]);
        f.c[j + len] = static_cast<uint16_t>((f.c[j] + kPrime - t) % kPrime);
        f.c[j] = static_cast<uint16_t>((f.c[j] + t) % kPrime);
      }
    }
  }
  return f;
}

inline Poly inverse_ntt(Poly f) {
  using poly_impl::mod_mul;
  int zi = 127;
  for (int len = 2; len <= 128; len <<= 1) {
    for (int start = 0; start < kDegree; start += 2 * len) {
      uint16_t zeta = poly_impl::kZetas[zi--];
      for (int j = start; j < start + len; j++) {
        uint16_t t = f.c[j];
        f.c[j] = static_cast<uint16_t>((t + f.c[j + len]) % kPrime);
        f.c[j + len] =
            mod_mul(zeta, static_cast<uint16_t>((f.c[j + len] + kPrime - t) % kPrime));
      }
    }
  }
  for (auto& v : f.c) v = mod_mul(v, poly_impl::kInverse128);
  return f;
}

// Pointwise product in the NTT domain: 128 independent products in
// Z_q[X]/(X^2 - gamma_i).
inline Poly ntt_multiply(const Poly& a, const Poly& b) {
  using poly_impl::mod_mul;
  Poly r;
  for (int i = 0; i < 128; i++) {
    uint16_t a0 = a.c[2 * i], a1 = a.c[2 * i + 1];
    uint16_t b0 = b.c[2 * i], b1 = b.c[2 * i + 1];
    uint32_t c0 = static_cast<uint32_t>(a0) * b0 +
                  static_cast<uint32_t>(mod_mul(a1, b1)) * poly_impl::kGammas[i];
    uint32_t c1 = static_cast<uint32_t>(a0) * b1 + static_cast<uint32_t>(a1) * b0;
    r.c[2 * i] = static_cast<uint16_t>(c0 % kPrime);
    r.c[2 * i + 1] = static_cast<uint16_t>(c1 % kPrime);
  }
  return r;
}

// Rounds x to d bits: round(2^d / q * x) mod 2^d, ties away from zero.
inline uint16_t compress(int d, uint16_t x) {
  if (d < 1 || d > 11) throw std::invalid_argument("compress: d out of range");
  if (x >= kPrime) throw std::invalid_argument("compress: coefficient out of range");
  uint32_t v = ((static_cast<uint32_t>(x) << (d + 1)) + kPrime) / (2 * kPrime);
  return static_cast<uint16_t>(v & ((1u << d) - 1));
}

inline uint16_t decompress(int d, uint16_t y) {
  if (d < 1 || d > 11) throw std::invalid_argument("decompress: d out of range");
  if (y >= (1u << d)) throw std::invalid_argument("decompress: value out of range");
  uint32_t v = (static_cast<uint32_t>(kPrime) * y + (1u << (d - 1))) >> d;
  return static_cast<uint16_t>(v);
}

// Uniform sampling in the NTT domain by rejection from an XOF stream. Each
// 3-byte group yields two 12-bit candidates; candidates >= q are discarded.
inline Poly sample_ntt(crypto::Keccak& xof) {
  Poly r;
  int filled = 0;
  uint8_t buf[3];
  while (filled < kDegree) {
    xof.squeeze(buf, 3);
    uint16_t d1 = static_cast<uint16_t>(buf[0] | (buf[1] & 0x0f) << 8);
    uint16_t d2 = static_cast<uint16_t>(buf[1] >> 4 | buf[2] << 4);
    if (d1 < kPrime) r.c[filled++] = d1;
    if (d2 < kPrime && filled < kDegree) r.c[filled++] = d2;
  }
  return r;
}

// Centered binomial distribution over eta coin pairs per coefficient.
// Consumes exactly 64 * eta bytes.
inline Poly sample_cbd(int eta, BytesView stream) {
  if (eta != 2 && eta != 3) throw std::invalid_argument("sample_cbd: bad eta");
  if (stream.size() != static_cast<size_t>(64 * eta))
    throw std::invalid_argument("sample_cbd: bad stream length");
  auto bit = [&](size_t i) -> uint16_t { return stream[i / 8] >> (i % 8) & 1; };
  Poly r;
  for (int i = 0; i < kDegree; i++) {
    uint16_t x = 0, y = 0;
    for (int j = 0; j < eta; j++) {
      x = static_cast<uint16_t>(x + bit(static_cast<size_t>(2 * i * eta + j)));
      y = static_cast<uint16_t>(y + bit(static_cast<size_t>(2 * i * eta + eta + j)));
    }
    r.c[i] = static_cast<uint16_t>((x + kPrime - y) % kPrime);
  }
  return r;
}

// Packs the d low bits of each coefficient, least significant bit first.
inline Bytes poly_encode(int d, const Poly& p) {
  if (d < 1 || d > 12) throw std::invalid_argument("poly_encode: d out of range");
  Bytes out(static_cast<size_t>(32 * d), 0);
  size_t bitpos = 0;
  for (int i = 0; i < kDegree; i++) {
    uint32_t v = p.c[i];
    for (int j = 0; j < d; j++) {
      out[bitpos / 8] |= static_cast<uint8_t>((v >> j & 1) << (bitpos % 8));
      bitpos++;
    }
  }
  return out;
}

// Inverse of poly_encode. For d = 12 a strict decode refuses any
// coefficient >= q; the lenient decode reduces it.
inline std::optional<Poly> poly_decode(int d, BytesView in, bool strict_modulus) {
  if (d < 1 || d > 12) throw std::invalid_argument("poly_decode: d out of range");
  if (in.size() != static_cast<size_t>(32 * d))
    throw std::invalid_argument("poly_decode: bad input length");
  Poly r;
  size_t bitpos = 0;
  for (int i = 0; i < kDegree; i++) {
    uint32_t v = 0;
    for (int j = 0; j < d; j++) {
      v |= static_cast<uint32_t>(in[bitpos / 8] >> (bitpos % 8) & 1) << j;
      bitpos++;
    }
    if (d == 12) {
      if (strict_modulus && v >= kPrime) return std::nullopt;
      v %= kPrime;
    }
    r.c[i] = static_cast<uint16_t>(v);
  }
  return r;
}

inline Poly poly_compress(int d, const Poly& p) {
  Poly r;
  for (int i = 0; i < kDegree; i++) r.c[i] = compress(d, p.c[i]);
  return r;
}

inline Poly poly_decompress(int d, const Poly& p) {
  Poly r;
  for (int i = 0; i < kDegree; i++) r.c[i] = decompress(d, p.c[i]);
  return r;
}

}  // namespace pq5g::kem
