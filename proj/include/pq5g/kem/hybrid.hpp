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

#include <optional>

#include "pq5g/bytes.hpp"
#include "pq5g/crypto/x25519.hpp"
#include "pq5g/kem/mlkem.hpp"
#include "pq5g/kem/params.hpp"

namespace pq5g::kem {

// Key-schedule input keying material for a negotiated mode: the classical
// shared secret is prepended to the lattice one, so a break of either
// component alone still leaves the other mixed in.
inline Bytes combine_secrets(
    const KemMode& mode,
    const std::optional<std::array<uint8_t, crypto::kX25519KeyLen>>& classical,
    const SharedSecret& pq) {
  if (mode.hybrid != classical.has_value())
    throw std::invalid_argument(
        "combine_secrets: classical share must be present exactly in hybrid mode");
  Bytes ikm;
  if (classical) append(ikm, view(*classical));
  append(ikm, view(pq));
  return ikm;
}

}  // namespace pq5g::kem
