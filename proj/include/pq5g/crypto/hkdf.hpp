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

#include "pq5g/bytes.hpp"
#include "pq5g/crypto/sha256.hpp"

namespace pq5g::crypto {

inline std::array<uint8_t, kSha256Len> hkdf_extract(BytesView salt, BytesView ikm) {
  return hmac_sha256(salt, ikm);
}

inline Bytes hkdf_expand(BytesView prk, BytesView info, size_t out_len) {
  if (out_len > 255 * kSha256Len)
    throw std::invalid_argument("hkdf_expand: output too long");
  Bytes out;
  out.reserve(out_len);
  std::array<uint8_t, kSha256Len> block{};
  uint8_t counter = 1;
  while (out.size() < out_len) {
    Bytes input;
    if (counter > 1) append(input, view(block));
    append(input, info);
    input.push_back(counter++);
    block = hmac_sha256(prk, input);
    size_t take = std::min(out_len - out.size(), block.size());
    out.insert(out.end(), block.begin(), block.begin() + take);
  }
  return out;
}

}  // namespace pq5g::crypto
