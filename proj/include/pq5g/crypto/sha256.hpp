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
#include <openssl/hmac.h>

#include <array>

#include "pq5g/bytes.hpp"

namespace pq5g::crypto {

inline constexpr size_t kSha256Len = 32;

// Incremental SHA-256. digest() snapshots the running state, so the caller
// can read intermediate hashes of a growing transcript.
class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("SHA-256 init failed");
  }
  Sha256(const Sha256& other) : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_MD_CTX_copy_ex(ctx_, other.ctx_) != 1)
      throw std::runtime_error("SHA-256 copy failed");
  }
  Sha256& operator=(const Sha256& other) {
    if (this != &other && EVP_MD_CTX_copy_ex(ctx_, other.ctx_) != 1)
      throw std::runtime_error("SHA-256 copy failed");
    return *this;
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }

  void update(BytesView data) {
    if (EVP_DigestUpdate(ctx_, data.data(), data.size()) != 1)
      throw std::runtime_error("SHA-256 update failed");
  }

  std::array<uint8_t, kSha256Len> digest() const {
    Sha256 snapshot(*this);
    std::array<uint8_t, kSha256Len> out;
    unsigned len = 0;
    if (EVP_DigestFinal_ex(snapshot.ctx_, out.data(), &len) != 1 || len != kSha256Len)
      throw std::runtime_error("SHA-256 final failed");
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

inline std::array<uint8_t, kSha256Len> sha256(BytesView data) {
  Sha256 h;
  h.update(data);
  return h.digest();
}

inline std::array<uint8_t, kSha256Len> hmac_sha256(BytesView key, BytesView msg) {
  std::array<uint8_t, kSha256Len> out;
  unsigned len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(),
           msg.size(), out.data(), &len) == nullptr ||
      len != kSha256Len)
    throw std::runtime_error("HMAC-SHA-256 failed");
  return out;
}

}  // namespace pq5g::crypto
