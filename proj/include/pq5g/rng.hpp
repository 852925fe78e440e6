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

#include <memory>
#include <random>
#include <string_view>

#include "pq5g/bytes.hpp"
#include "pq5g/keccak.hpp"

namespace pq5g {

// Randomness source shared by every component that consumes entropy. The
// deterministic implementation makes whole simulation runs reproducible from
// one seed.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(uint8_t* out, size_t n) = 0;

  Bytes bytes(size_t n) {
    Bytes out(n);
    fill(out.data(), n);
    return out;
  }

  template <size_t N>
  std::array<uint8_t, N> array() {
    std::array<uint8_t, N> out;
    fill(out.data(), N);
    return out;
  }
};

class SystemRandom final : public RandomSource {
 public:
  void fill(uint8_t* out, size_t n) override {
    for (size_t i = 0; i < n; i++) out[i] = static_cast<uint8_t>(dist_(dev_));
  }

 private:
  std::random_device dev_;
  std::uniform_int_distribution<unsigned> dist_{0, 255};
};

// SHAKE256-based deterministic stream. fork(label) yields an independent
// stream so that simulation actors never race each other for draw order.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(uint64_t seed, std::string_view label = "") {
    Bytes input;
    append_u64be(input, seed);
    append(input, to_bytes(label));
    xof_.absorb(input);
  }

  void fill(uint8_t* out, size_t n) override { xof_.squeeze(out, n); }

  std::unique_ptr<DeterministicRandom> fork(std::string_view label) {
    std::array<uint8_t, 8> sub;
    xof_.squeeze(sub.data(), sub.size());
    uint64_t seed = 0;
    for (uint8_t b : sub) seed = seed << 8 | b;
    return std::make_unique<DeterministicRandom>(seed, label);
  }

 private:
  crypto::Keccak xof_{crypto::Keccak::Kind::kShake256};
};

}  // namespace pq5g
