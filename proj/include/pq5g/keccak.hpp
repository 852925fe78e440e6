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
#include <cstdint>

#include "pq5g/bytes.hpp"

namespace pq5g::crypto {

namespace keccak_impl {

inline constexpr std::array<uint64_t, 24> kRoundConstants = {
    0x0000000000000001, 0x0000000000008082, 0x800000000000808a,
    0x8000000080008000, 0x000000000000808b, 0x0000000080000001,
    0x8000000080008081, 0x8000000000008009, 0x000000000000008a,
    0x0000000000000088, 0x0000000080008009, 0x000000008000000a,
    0x000000008000808b, 0x800000000000008b, 0x8000000000008089,
    0x8000000000008003, 0x8000000000008002, 0x8000000000000080,
    0x000000000000800a, 0x800000008000000a, 0x8000000080008081,
    0x8000000000008080, 0x0000000080000001, 0x8000000080008008};

// Rotation amounts for lane (x, y) at index x + 5y.
inline constexpr std::array<int, 25> kRho = {0,  1,  62, 28, 27,  //
                                             36, 44, 6,  55, 20,  //
                                             3,  10, 43, 25, 39,  //
                                             41, 45, 15, 21, 8,   //
                                             18, 2,  61, 56, 14};

inline constexpr uint64_t rotl(uint64_t v, int s) {
  return s == 0 ? v : (v << s) | (v >> (64 - s));
}

inline void permute(std::array<uint64_t, 25>& a) {
  for (uint64_t rc : kRoundConstants) {
    uint64_t c[5];
    for (int x = 0; x < 5; x++)
      c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
    for (int x = 0; x < 5; x++) {
      uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
      for (int y = 0; y < 25; y += 5) a[x + y] ^= d;
    }
    std::array<uint64_t, 25> b;
    for (int x = 0; x < 5; x++) {
      for (int y = 0; y < 5; y++) {
        int src = x + 5 * y;
        b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(a[src], kRho[src]);
      }
    }
    for (int y = 0; y < 25; y += 5) {
      for (int x = 0; x < 5; x++)
        a[x + y] = b[x + y] ^ (~b[(x + 1) % 5 + y] & b[(x + 2) % 5 + y]);
    }
    a[0] ^= rc;
  }
}

}  // namespace keccak_impl

// Keccak[c] sponge with byte-granular absorb and incremental squeeze. The
// incremental squeeze is what the lattice rejection sampler needs; it pulls
// an unbounded stream without knowing the output length up front.
class Keccak {
 public:
  enum class Kind { kSha3_256, kSha3_512, kShake128, kShake256 };

  explicit Keccak(Kind kind) {
    switch (kind) {
      case Kind::kSha3_256: rate_ = 136; ds_ = 0x06; digest_len_ = 32; break;
      case Kind::kSha3_512: rate_ = 72;  ds_ = 0x06; digest_len_ = 64; break;
      case Kind::kShake128: rate_ = 168; ds_ = 0x1f; digest_len_ = 0;  break;
      case Kind::kShake256: rate_ = 136; ds_ = 0x1f; digest_len_ = 0;  break;
    }
  }

  Keccak& absorb(BytesView data) {
    if (squeezing_) throw std::logic_error("absorb after squeeze");
    for (uint8_t byte : data) {
      xor_byte(offset_++, byte);
      if (offset_ == rate_) {
        keccak_impl::permute(state_);
        offset_ = 0;
      }
    }
    return *this;
  }

  void squeeze(uint8_t* out, size_t n) {
    if (!squeezing_) {
      xor_byte(offset_, ds_);
      xor_byte(rate_ - 1, 0x80);
      keccak_impl::permute(state_);
      offset_ = 0;
      squeezing_ = true;
    }
    for (size_t i = 0; i < n; i++) {
      if (offset_ == rate_) {
        keccak_impl::permute(state_);
        offset_ = 0;
      }
      out[i] = lane_byte(offset_++);
    }
  }

  Bytes squeeze(size_t n) {
    Bytes out(n);
    squeeze(out.data(), n);
    return out;
  }

  // Digest length for the SHA3 kinds; 0 for the XOFs.
  size_t digest_len() const { return digest_len_; }

 private:
  void xor_byte(size_t pos, uint8_t v) {
    state_[pos / 8] ^= static_cast<uint64_t>(v) << (8 * (pos % 8));
  }
  uint8_t lane_byte(size_t pos) const {
    return static_cast<uint8_t>(state_[pos / 8] >> (8 * (pos % 8)));
  }

  std::array<uint64_t, 25> state_{};
  size_t rate_;
  uint8_t ds_;
  size_t digest_len_;
  size_t offset_ = 0;
  bool squeezing_ = false;
};

inline std::array<uint8_t, 32> sha3_256(BytesView data) {
  Keccak k(Keccak::Kind::kSha3_256);
  k.absorb(data);
  std::array<uint8_t, 32> out;
  k.squeeze(out.data(), out.size());
  return out;
}

inline std::array<uint8_t, 64> sha3_512(BytesView data) {
  Keccak k(Keccak::Kind::kSha3_512);
  k.absorb(data);
  std::array<uint8_t, 64> out;
  k.squeeze(out.data(), out.size());
  return out;
}

inline Bytes shake128(BytesView data, size_t n) {
  Keccak k(Keccak::Kind::kShake128);
  k.absorb(data);
  return k.squeeze(n);
}

inline Bytes shake256(BytesView data, size_t n) {
  Keccak k(Keccak::Kind::kShake256);
  k.absorb(data);
  return k.squeeze(n);
}

}  // namespace pq5g::crypto
