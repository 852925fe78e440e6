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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pq5g::kem {

// Parameter sets for the three standardized security levels. Sizes follow
// from k: |ek| = 384k + 32, |dk| = 768k + 96, |ct| = 32(du*k + dv).
struct KemParams {
  int level;
  int k;
  int eta1;
  int eta2;
  int du;
  int dv;
  size_t ek_len;
  size_t dk_len;
  size_t ct_len;

  static constexpr size_t kSharedSecretLen = 32;
  static constexpr size_t kSeedLen = 64;
  static constexpr size_t kMessageLen = 32;

  static const KemParams& level512() {
    static const KemParams p{512, 2, 3, 2, 10, 4, 800, 1632, 768};
    return p;
  }
  static const KemParams& level768() {
    static const KemParams p{768, 3, 2, 2, 10, 4, 1184, 2400, 1088};
    return p;
  }
  static const KemParams& level1024() {
    static const KemParams p{1024, 4, 2, 2, 11, 5, 1568, 3168, 1568};
    return p;
  }

  static const KemParams& for_level(int level) {
    switch (level) {
      case 512: return level512();
      case 768: return level768();
      case 1024: return level1024();
      default:
        throw std::invalid_argument("unsupported security level " +
                                    std::to_string(level));
    }
  }
};

// Negotiated key-exchange mode: one of the three levels, either alone or
// combined with an X25519 exchange. The wire byte sets the high bit for
// hybrid so that unknown modes decode to nothing rather than the wrong arm.
struct KemMode {
  int level = 768;
  bool hybrid = true;

  bool operator==(const KemMode&) const = default;

  uint8_t wire_byte() const {
    uint8_t base;
    switch (level) {
      case 512: base = 0x01; break;
      case 768: base = 0x02; break;
      case 1024: base = 0x03; break;
      default:
        throw std::invalid_argument("unsupported security level " +
                                    std::to_string(level));
    }
    return hybrid ? static_cast<uint8_t>(base | 0x80) : base;
  }

  static std::optional<KemMode> from_wire(uint8_t b) {
    bool hybrid = (b & 0x80) != 0;
    switch (b & 0x7f) {
      case 0x01: return KemMode{512, hybrid};
      case 0x02: return KemMode{768, hybrid};
      case 0x03: return KemMode{1024, hybrid};
      default: return std::nullopt;
    }
  }

  const KemParams& params() const { return KemParams::for_level(level); }

  std::string name() const {
    return (hybrid ? std::string("hybrid-") : std::string("mlkem-")) +
           std::to_string(level) + (hybrid ? "-x25519" : "");
  }
};

}  // namespace pq5g::kem
