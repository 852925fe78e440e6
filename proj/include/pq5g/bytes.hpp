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
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pq5g {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::string to_string(BytesView b) {
  return std::string(b.begin(), b.end());
}

inline BytesView view(const Bytes& b) { return BytesView(b.data(), b.size()); }

template <size_t N>
inline BytesView view(const std::array<uint8_t, N>& a) {
  return BytesView(a.data(), N);
}

inline Bytes concat(std::initializer_list<BytesView> parts) {
  size_t total = 0;
  for (auto p : parts) total += p.size();
  Bytes out;
  out.reserve(total);
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline void append(Bytes& out, BytesView data) {
  out.insert(out.end(), data.begin(), data.end());
}

inline void append_u8(Bytes& out, uint8_t v) { out.push_back(v); }

inline void append_u16be(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void append_u24be(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void append_u32be(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void append_u64be(Bytes& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<uint8_t>(v >> shift));
}

inline uint16_t read_u16be(BytesView b, size_t off) {
  return static_cast<uint16_t>(b[off] << 8 | b[off + 1]);
}

inline uint32_t read_u24be(BytesView b, size_t off) {
  return static_cast<uint32_t>(b[off]) << 16 | static_cast<uint32_t>(b[off + 1]) << 8 |
         b[off + 2];
}

inline uint32_t read_u32be(BytesView b, size_t off) {
  return static_cast<uint32_t>(b[off]) << 24 | static_cast<uint32_t>(b[off + 1]) << 16 |
         static_cast<uint32_t>(b[off + 2]) << 8 | b[off + 3];
}

inline uint64_t read_u64be(BytesView b, size_t off) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; i++) v = v << 8 | b[off + i];
  return v;
}

// Raised on malformed wire input or files; callers on protocol paths catch it
// and turn it into the protocol's own failure signal.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bounds-checked sequential reader over a byte view.
class ByteReader {
 public:
  explicit ByteReader(BytesView data) : data_(data) {}

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u16be() {
    need(2);
    uint16_t v = read_u16be(data_, pos_);
    pos_ += 2;
    return v;
  }
  uint32_t u24be() {
    need(3);
    uint32_t v = read_u24be(data_, pos_);
    pos_ += 3;
    return v;
  }
  uint32_t u32be() {
    need(4);
    uint32_t v = read_u32be(data_, pos_);
    pos_ += 4;
    return v;
  }
  uint64_t u64be() {
    need(8);
    uint64_t v = read_u64be(data_, pos_);
    pos_ += 8;
    return v;
  }
  BytesView take(size_t n) {
    need(n);
    BytesView v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }
  void expect_end() const {
    if (!done()) throw ParseError("trailing bytes");
  }

 private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) throw ParseError("truncated input");
  }
  BytesView data_;
  size_t pos_ = 0;
};

inline std::string to_hex(BytesView b) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(b.size() * 2);
  for (uint8_t v : b) {
    s.push_back(digits[v >> 4]);
    s.push_back(digits[v & 0xf]);
  }
  return s;
}

inline Bytes from_hex(std::string_view s) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (s.size() % 2 != 0) throw ParseError("odd-length hex string");
  Bytes out;
  out.reserve(s.size() / 2);
  for (size_t i = 0; i < s.size(); i += 2) {
    int hi = nibble(s[i]), lo = nibble(s[i + 1]);
    if (hi < 0 || lo < 0) throw ParseError("invalid hex digit");
    out.push_back(static_cast<uint8_t>(hi << 4 | lo));
  }
  return out;
}

// Constant-time equality for secret material.
inline bool ct_equal(BytesView a, BytesView b) {
  if (a.size() != b.size()) return false;
  uint8_t acc = 0;
  for (size_t i = 0; i < a.size(); i++) acc |= a[i] ^ b[i];
  return acc == 0;
}

}  // namespace pq5g
