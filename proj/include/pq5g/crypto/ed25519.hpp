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

#include "pq5g/bytes.hpp"

namespace pq5g::crypto {

inline constexpr size_t kEd25519SeedLen = 32;
inline constexpr size_t kEd25519PublicKeyLen = 32;
inline constexpr size_t kEd25519SignatureLen = 64;

namespace ed25519_impl {
struct PkeyFree {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdctxFree {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
using Mdctx = std::unique_ptr<EVP_MD_CTX, MdctxFree>;
}  // namespace ed25519_impl

inline std::array<uint8_t, kEd25519PublicKeyLen> ed25519_public_key(
    BytesView seed32) {
  if (seed32.size() != kEd25519SeedLen)
    throw std::invalid_argument("ed25519_public_key: seed must be 32 bytes");
  ed25519_impl::Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                                      seed32.data(), seed32.size()));
  if (!key) throw std::runtime_error("Ed25519 key import failed");
  std::array<uint8_t, kEd25519PublicKeyLen> out;
  size_t len = out.size();
  if (EVP_PKEY_get_raw_public_key(key.get(), out.data(), &len) != 1 ||
      len != out.size())
    throw std::runtime_error("Ed25519 public key export failed");
  return out;
}

inline std::array<uint8_t, kEd25519SignatureLen> ed25519_sign(BytesView seed32,
                                                              BytesView msg) {
  if (seed32.size() != kEd25519SeedLen)
    throw std::invalid_argument("ed25519_sign: seed must be 32 bytes");
  ed25519_impl::Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                                      seed32.data(), seed32.size()));
  ed25519_impl::Mdctx ctx(EVP_MD_CTX_new());
  if (!key || !ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1)
    throw std::runtime_error("Ed25519 sign init failed");
  std::array<uint8_t, kEd25519SignatureLen> sig;
  size_t len = sig.size();
  if (EVP_DigestSign(ctx.get(), sig.data(), &len, msg.data(), msg.size()) != 1 ||
      len != sig.size())
    throw std::runtime_error("Ed25519 sign failed");
  return sig;
}

inline bool ed25519_verify(const std::array<uint8_t, kEd25519PublicKeyLen>& pub,
                           BytesView msg,
                           const std::array<uint8_t, kEd25519SignatureLen>& sig) {
  ed25519_impl::Pkey key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                                     pub.data(), pub.size()));
  ed25519_impl::Mdctx ctx(EVP_MD_CTX_new());
  if (!key || !ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1)
    return false;
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), msg.data(),
                          msg.size()) == 1;
}

}  // namespace pq5g::crypto
