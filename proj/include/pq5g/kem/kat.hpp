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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pq5g/bytes.hpp"
#include "pq5g/kem/mlkem.hpp"

namespace pq5g::kem {

// One known-answer vector. Seeds drive the run; every non-empty expectation
// is checked byte for byte.
struct KatVector {
  int index = -1;
  Bytes d, z, m;
  Bytes ek, dk, ct, ss;
};

struct KatFile {
  int level = 0;  // 0: infer per vector from the ek/dk length
  std::vector<KatVector> vectors;
};

namespace kat_impl {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline int level_from_header(const std::string& header) {
  std::string h = lower(header);
  if (h.find("512") != std::string::npos) return 512;
  if (h.find("768") != std::string::npos) return 768;
  if (h.find("1024") != std::string::npos) return 1024;
  return 0;
}

inline int level_from_lengths(const KatVector& v) {
  for (int level : {512, 768, 1024}) {
    const KemParams& p = KemParams::for_level(level);
    if ((!v.ek.empty() && v.ek.size() == p.ek_len) ||
        (!v.dk.empty() && v.dk.size() == p.dk_len) ||
        (!v.ct.empty() && v.ct.size() == p.ct_len))
      return level;
  }
  return 0;
}

}  // namespace kat_impl

// Parses `name = hex` response files. Accepts the common field spellings
// (ek/pk, dk/sk, ct/c, ss/k, m/msg, combined 64-byte seed = d || z) and
// [bracketed] section headers carrying the parameter-set name.
inline KatFile parse_kat_file(const std::string& text) {
  using kat_impl::lower;
  using kat_impl::trim;

  KatFile file;
  KatVector current;
  bool have_field = false;

  auto flush = [&] {
    if (!have_field) return;
    if (current.d.empty() || current.z.empty())
      throw ParseError("vector missing the d/z key generation seed");
    if (current.d.size() != 32 || current.z.size() != 32)
      throw ParseError("d and z must be 32 bytes each");
    if (current.index < 0) current.index = static_cast<int>(file.vectors.size());
    file.vectors.push_back(std::move(current));
    current = KatVector{};
    have_field = false;
  };

  std::istringstream lines(text);
  std::string raw;
  size_t line_no = 0;
  while (std::getline(lines, raw)) {
    line_no++;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      int level = kat_impl::level_from_header(line);
      if (level) file.level = level;
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected name = value");
    std::string name = lower(trim(line.substr(0, eq)));
    std::string value = trim(line.substr(eq + 1));

    if (name == "count") {
      flush();
      try {
        current.index = std::stoi(value);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad count");
      }
      have_field = true;
      continue;
    }

    Bytes* slot = nullptr;
    if (name == "d") slot = &current.d;
    else if (name == "z") slot = &current.z;
    else if (name == "m" || name == "msg") slot = &current.m;
    else if (name == "ek" || name == "pk") slot = &current.ek;
    else if (name == "dk" || name == "sk") slot = &current.dk;
    else if (name == "ct" || name == "c") slot = &current.ct;
    else if (name == "ss" || name == "k") slot = &current.ss;
    // Unknown fields are ignored so files with extra metadata still load.
    else if (name != "seed") continue;

    Bytes bytes;
    try {
      bytes = from_hex(value);
    } catch (const ParseError&) {
      throw ParseError("line " + std::to_string(line_no) + ": bad hex in field " + name);
    }

    if (name == "seed") {
      if (bytes.size() == 48)
        throw ParseError(
            "48-byte DRBG seeds from the round-3 format are not supported; "
            "provide d and z (or a 64-byte seed = d || z)");
      if (bytes.size() != 64)
        throw ParseError("line " + std::to_string(line_no) + ": seed must be 64 bytes");
      if (!current.d.empty() || !current.z.empty()) flush();
      current.d.assign(bytes.begin(), bytes.begin() + 32);
      current.z.assign(bytes.begin() + 32, bytes.end());
      have_field = true;
      continue;
    }

    if (!slot->empty()) flush();  // repeated field opens the next vector
    *slot = std::move(bytes);
    have_field = true;
  }
  flush();
  if (file.vectors.empty()) throw ParseError("no vectors found");
  return file;
}

inline KatFile load_kat_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kat_file(buf.str());
}

struct KatMismatch {
  int vector_index;
  std::string field;
  size_t byte_offset;  // first differing byte (min length when one is a prefix)
  std::string expected_hex;
  std::string actual_hex;
};

struct KatOutcome {
  int level = 0;
  size_t vectors_run = 0;
  size_t checks = 0;
  std::vector<KatMismatch> mismatches;

  bool ok() const { return mismatches.empty() && vectors_run > 0; }
};

// Replays every vector through keygen/encaps/decaps and compares each
// provided expectation byte for byte.
inline KatOutcome run_kat(const KatFile& file) {
  KatOutcome out;
  out.level = file.level;

  auto check = [&](int index, const char* field, const Bytes& expected,
                   BytesView actual) {
    if (expected.empty()) return;
    out.checks++;
    size_t n = std::min(expected.size(), actual.size());
    size_t diff = n;
    for (size_t i = 0; i < n; i++) {
      if (expected[i] != actual[i]) {
        diff = i;
        break;
      }
    }
    if (diff == n && expected.size() == actual.size()) return;
    auto hex_at = [](BytesView b, size_t at) {
      return at < b.size() ? to_hex(b.subspan(at, 1)) : std::string("<end>");
    };
    out.mismatches.push_back(KatMismatch{index, field, diff,
                                         hex_at(view(expected), diff),
                                         hex_at(actual, diff)});
  };

  for (const auto& v : file.vectors) {
    int level = file.level ? file.level : kat_impl::level_from_lengths(v);
    if (!level)
      throw ParseError("vector " + std::to_string(v.index) +
                       ": cannot determine the parameter set");
    const KemParams& p = KemParams::for_level(level);
    out.level = level;

    Bytes seed = v.d;
    append(seed, view(v.z));
    auto [ek, dk] = keygen(p, view(seed));
    check(v.index, "ek", v.ek, view(ek.bytes));
    check(v.index, "dk", v.dk, view(dk.bytes));

    if (!v.m.empty()) {
      auto [ct, ss] = encaps(ek, view(v.m));
      check(v.index, "ct", v.ct, view(ct.bytes));
      check(v.index, "ss", v.ss, view(ss));

      SharedSecret dec = decaps(dk, ct);
      check(v.index, "ss(decaps)", v.ss, view(dec));
    } else if (!v.ct.empty()) {
      // Decapsulation-only vector: no message seed, just dk + ct + ss.
      KemCiphertext ct{level, v.ct};
      SharedSecret dec = decaps(dk, ct);
      check(v.index, "ss(decaps)", v.ss, view(dec));
    }
    out.vectors_run++;
  }
  return out;
}

}  // namespace pq5g::kem
