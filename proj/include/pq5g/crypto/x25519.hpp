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

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <optional>

#include "pq5g/bytes.hpp"
#include "pq5g/rng.hpp"

namespace pq5g::crypto {

inline constexpr size_t kX25519KeyLen = 32;

struct X25519KeyPair {
  std::array<uint8_t, kX25519KeyLen> public_key;
  std::array<uint8_t, kX25519KeyLen> private_key;
};

namespace x25519_impl {
struct PkeyFree {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PctxFree {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
using Pctx = std::unique_ptr<EVP_PKEY_CTX, PctxFree>;
}  // namespace x25519_impl

inline X25519KeyPair x25519_keypair(BytesView seed32) {
  if (seed32.size() != kX25519KeyLen)
    throw std::invalid_argument("x25519_keypair: seed must be 32 bytes");
  x25519_impl::Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr,
                                                     seed32.data(), seed32.size()));
  if (!key) throw std::runtime_error("X25519 key import failed");
  X25519KeyPair out;
  std::copy(seed32.begin(), seed32.end(), out.private_key.begin());
  size_t len = kX25519KeyLen;
  if (EVP_PKEY_get_raw_public_key(key.get(), out.public_key.data(), &len) != 1 ||
      len != kX25519KeyLen)
    throw std::runtime_error("X25519 public key export failed");
  return out;
}

inline X25519KeyPair x25519_keypair(RandomSource& rng) {
  return x25519_keypair(rng.bytes(kX25519KeyLen));
}

// Diffie-Hellman step. nullopt when the peer point is invalid (the shared
// point would be all-zero); callers treat that as a protocol failure.
inline std::optional<std::array<uint8_t, kX25519KeyLen>> x25519_shared(
    const std::array<uint8_t, kX25519KeyLen>& private_key,
    BytesView peer_public) {
  if (peer_public.size() != kX25519KeyLen) return std::nullopt;
  x25519_impl::Pkey self(EVP_PKEY_new_raw_private_key(
      EVP_PKEY_X25519, nullptr, private_key.data(), private_key.size()));
  x25519_impl::Pkey peer(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr,
                                                     peer_public.data(),
                                                     peer_public.size()));
  if (!self || !peer) return std::nullopt;
  x25519_impl::Pctx ctx(EVP_PKEY_CTX_new(self.get(), nullptr));
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1)
    return std::nullopt;
  std::array<uint8_t, kX25519KeyLen> out;
  size_t len = out.size();
  if (EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1 || len != out.size())
    return std::nullopt;
  return out;
}

}  // namespace pq5g::crypto
