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

#include <memory>
#include <optional>

#include "pq5g/bytes.hpp"

namespace pq5g::crypto {

inline constexpr size_t kAeadKeyLen = 16;
inline constexpr size_t kAeadNonceLen = 12;
inline constexpr size_t kAeadTagLen = 16;

namespace aead_impl {
struct CtxFree {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using Ctx = std::unique_ptr<EVP_CIPHER_CTX, CtxFree>;
}  // namespace aead_impl

// AES-128-GCM seal: returns ciphertext with the 16-byte tag appended.
inline Bytes aead_seal(const std::array<uint8_t, kAeadKeyLen>& key,
                       const std::array<uint8_t, kAeadNonceLen>& nonce,
                       BytesView aad, BytesView plaintext) {
  aead_impl::Ctx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("AEAD context allocation failed");
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                         nonce.data()) != 1)
    throw std::runtime_error("AEAD seal init failed");
  int len = 0;
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1)
    throw std::runtime_error("AEAD seal aad failed");
  Bytes out(plaintext.size() + kAeadTagLen);
  int ct_len = 0;
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data(), &ct_len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1)
    throw std::runtime_error("AEAD seal update failed");
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + ct_len, &len) != 1)
    throw std::runtime_error("AEAD seal final failed");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagLen,
                          out.data() + plaintext.size()) != 1)
    throw std::runtime_error("AEAD seal tag failed");
  return out;
}

// AES-128-GCM open: nullopt on any authentication failure.
inline std::optional<Bytes> aead_open(const std::array<uint8_t, kAeadKeyLen>& key,
                                      const std::array<uint8_t, kAeadNonceLen>& nonce,
                                      BytesView aad, BytesView sealed) {
  if (sealed.size() < kAeadTagLen) return std::nullopt;
  size_t ct_len = sealed.size() - kAeadTagLen;
  aead_impl::Ctx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("AEAD context allocation failed");
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                         nonce.data()) != 1)
    throw std::runtime_error("AEAD open init failed");
  int len = 0;
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1)
    return std::nullopt;
  Bytes out(ct_len);
  int pt_len = 0;
  if (ct_len > 0 &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &pt_len, sealed.data(),
                        static_cast<int>(ct_len)) != 1)
    return std::nullopt;
  uint8_t tag[kAeadTagLen];
  std::memcpy(tag, sealed.data() + ct_len, kAeadTagLen);
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagLen, tag) != 1)
    return std::nullopt;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + pt_len, &len) != 1)
    return std::nullopt;
  return out;
}

}  // namespace pq5g::crypto
