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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pq5g/bytes.hpp"
#include "pq5g/core5g/control.hpp"
#include "pq5g/core5g/gtpu.hpp"
#include "pq5g/core5g/packet.hpp"
#include "pq5g/core5g/topology.hpp"
#include "pq5g/handshake/certificate.hpp"
#include "pq5g/handshake/connection.hpp"
#include "pq5g/kem/kat.hpp"
#include "pq5g/rng.hpp"
#include "pq5g/ue/workflow.hpp"

namespace pq5g::fuzz {

struct FuzzOutcome {
  int iterations = 0;
  size_t parser_calls = 0;
  size_t rejected = 0;  // inputs cleanly refused
  size_t accepted = 0;  // inputs that happened to parse
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace fuzz_impl {

struct Harness {
  RandomSource& rng;
  FuzzOutcome& out;

  uint8_t byte() { return rng.bytes(1)[0]; }

  Bytes random_bytes() {
    size_t len = (size_t(byte()) << 2) % 700;
    return rng.bytes(len);
  }

  Bytes mutated(Bytes data) {
    if (data.empty()) return data;
    Bytes original = data;
    int flips = 1 + byte() % 4;
    for (int i = 0; i < flips; i++) {
      size_t pos = (size_t(byte()) << 8 | byte()) % data.size();
      uint8_t bit = uint8_t(1) << (byte() % 8);
      data[pos] ^= bit;
    }
    if (data == original) data[0] ^= 0x01;  // flips must not cancel out
    return data;
  }

  Bytes resized(Bytes data) {
    if (data.empty()) return data;
    size_t cut = (size_t(byte()) << 8 | byte()) % (data.size() + 16);
    if (cut == data.size()) cut /= 2;  // identity would be a valid flight
    if (cut <= data.size()) {
      data.resize(cut);
    } else {
      Bytes extra = rng.bytes(cut - data.size());
      append(data, view(extra));
    }
    return data;
  }

  // A parser must either succeed or throw ParseError/invalid_argument.
  void feed(const char* what, const std::function<void()>& call) {
    out.parser_calls++;
    try {
      call();
      out.accepted++;
    } catch (const ParseError&) {
      out.rejected++;
    } catch (const std::invalid_argument&) {
      out.rejected++;
    } catch (const std::exception& e) {
      out.violations.push_back(std::string(what) + ": unexpected " + e.what());
    }
  }
};

struct Endpoints {
  std::unique_ptr<handshake::Connection> client;
  std::unique_ptr<handshake::Connection> server;
  Bytes client_hello;
};

inline handshake::ConnectionConfig fuzz_config(bool is_client,
                                               const ue::workflow_impl::Identity& id,
                                               const handshake::TrustAnchor& root) {
  handshake::ConnectionConfig cc;
  cc.is_client = is_client;
  cc.modes = {kem::KemMode{768, true}};
  cc.certificate = id.certificate;
  cc.signing_seed = id.signing_seed;
  cc.trust_anchors = {root};
  cc.now = ue::kDemoClock;
  return cc;
}

}  // namespace fuzz_impl

// Randomized robustness sweep: junk and mutated inputs against every wire
// parser plus both handshake endpoints. An iteration fails only if a parser
// escapes with an unexpected exception type or a mutated flight still
// completes a handshake.
inline FuzzOutcome run_fuzz(int iters, std::optional<uint64_t> seed) {
  if (iters < 1) throw std::invalid_argument("iters must be positive");

  std::unique_ptr<RandomSource> rng;
  if (seed)
    rng = std::make_unique<DeterministicRandom>(*seed, "fuzz");
  else
    rng = std::make_unique<SystemRandom>();

  FuzzOutcome out;
  fuzz_impl::Harness h{*rng, out};

  auto issuer_seed = rng->array<crypto::kEd25519SeedLen>();
  handshake::TrustAnchor root{ue::kDemoIssuer,
                              crypto::ed25519_public_key(view(issuer_seed))};
  auto client_id =
      ue::workflow_impl::make_identity("fuzz-client", view(issuer_seed), *rng);
  auto server_id =
      ue::workflow_impl::make_identity("fuzz-server", view(issuer_seed), *rng);

  auto make_endpoints = [&] {
    fuzz_impl::Endpoints e;
    e.client = std::make_unique<handshake::Connection>(
        fuzz_impl::fuzz_config(true, client_id, root), *rng);
    e.server = std::make_unique<handshake::Connection>(
        fuzz_impl::fuzz_config(false, server_id, root), *rng);
    e.client_hello = e.client->start();
    return e;
  };

  // The endpoint under attack must never land in kConnected off a mutated
  // flight, and consume() must never throw.
  auto attack = [&](handshake::Connection& target, const Bytes& datagram,
                    const char* what) {
    try {
      (void)target.consume(view(datagram));
      if (target.phase() == handshake::Phase::kConnected)
        out.violations.push_back(std::string(what) +
                                 ": mutated flight completed the handshake");
    } catch (const std::exception& e) {
      out.violations.push_back(std::string(what) + ": consume threw " + e.what());
    }
  };

  for (int iter = 0; iter < iters; iter++) {
    out.iterations++;
    switch (iter % 5) {
      case 0: {
        Bytes junk = h.random_bytes();
        h.feed("ctrl_frame", [&] { (void)core5g::parse_ctrl_frame(view(junk)); });
        h.feed("gtpu_decap", [&] { (void)core5g::gtpu_decap(view(junk)); });
        h.feed("inner_packet", [&] { (void)core5g::parse_inner(view(junk)); });
        h.feed("split_records", [&] { (void)handshake::split_records(view(junk)); });
        break;
      }
      case 1: {
        Bytes junk = h.random_bytes();
        h.feed("certificate", [&] {
          ByteReader r(view(junk));
          (void)handshake::parse_certificate(r);
        });
        std::string text(junk.begin(), junk.end());
        h.feed("topology_json",
               [&] { (void)core5g::Topology::from_json_text(text); });
        h.feed("kat_file", [&] { (void)kem::parse_kat_file(text); });
        break;
      }
      case 2: {
        auto e = make_endpoints();
        attack(*e.server, h.mutated(e.client_hello), "server<-hello");
        break;
      }
      case 3: {
        auto e = make_endpoints();
        Bytes server_flight = e.server->consume(view(e.client_hello));
        attack(*e.client, h.mutated(server_flight), "client<-flight");
        break;
      }
      case 4: {
        auto e = make_endpoints();
        if (h.byte() & 1) {
          attack(*e.server, h.resized(e.client_hello), "server<-resized");
        } else {
          Bytes server_flight = e.server->consume(view(e.client_hello));
          attack(*e.client, h.resized(server_flight), "client<-resized");
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace pq5g::fuzz
