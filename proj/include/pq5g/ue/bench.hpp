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
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pq5g/core5g/network.hpp"
#include "pq5g/handshake/certificate.hpp"
#include "pq5g/handshake/connection.hpp"
#include "pq5g/rng.hpp"
#include "pq5g/ue/workflow.hpp"

namespace pq5g::ue {

// One server endpoint serving any number of concurrent client actors, one
// key-exchange session per client.
class HandshakeServerActor final : public core5g::Node {
 public:
  HandshakeServerActor(std::string id, handshake::ConnectionConfig base,
                       RandomSource& rng)
      : Node(std::move(id)), base_(std::move(base)), rng_(&rng) {}

  void on_frame(const std::string& from, BytesView frame) override {
    auto it = conns_.find(from);
    if (it == conns_.end()) {
      it = conns_
               .emplace(from, std::make_unique<handshake::Connection>(base_, *rng_))
               .first;
    }
    Bytes resp = it->second->consume(frame);
    if (!resp.empty()) send(from, std::move(resp));
  }

  size_t sessions() const { return conns_.size(); }

 private:
  handshake::ConnectionConfig base_;
  RandomSource* rng_;
  std::map<std::string, std::unique_ptr<handshake::Connection>> conns_;
};

class HandshakeClientActor final : public core5g::Node {
 public:
  HandshakeClientActor(std::string id, std::string server_id,
                       handshake::ConnectionConfig base, RandomSource& rng)
      : Node(std::move(id)),
        server_id_(std::move(server_id)),
        base_(std::move(base)),
        rng_(&rng) {}

  void kick() {
    conn_ = std::make_unique<handshake::Connection>(base_, *rng_);
    conn_->set_event_hook([this](handshake::HsEvent e) {
      if (e == handshake::HsEvent::kConnected)
        t_end_ = std::chrono::steady_clock::now();
    });
    t_start_ = std::chrono::steady_clock::now();
    send(server_id_, conn_->start());
  }

  void on_frame(const std::string& from, BytesView frame) override {
    if (!conn_) return;
    Bytes resp = conn_->consume(frame);
    if (!resp.empty()) send(from, std::move(resp));
  }

  bool complete() const { return t_end_.has_value(); }

  double latency_us() const {
    return std::chrono::duration<double, std::micro>(*t_end_ - t_start_).count();
  }

 private:
  std::string server_id_;
  handshake::ConnectionConfig base_;
  RandomSource* rng_;
  std::unique_ptr<handshake::Connection> conn_;
  std::chrono::steady_clock::time_point t_start_;
  std::optional<std::chrono::steady_clock::time_point> t_end_;
};

struct BenchRow {
  kem::KemMode mode;
  size_t count = 0;
  size_t failures = 0;
  double min_us = 0, mean_us = 0, median_us = 0, p95_us = 0, max_us = 0;
};

struct BenchReport {
  int iters = 0;
  int clients = 0;
  std::optional<uint64_t> seed;
  std::vector<BenchRow> rows;

  size_t total_failures() const {
    size_t n = 0;
    for (const auto& r : rows) n += r.failures;
    return n;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      arr.push_back({{"mode", r.mode.hybrid ? "hybrid" : "conventional"},
                     {"level", r.mode.level},
                     {"name", r.mode.name()},
                     {"count", r.count},
                     {"failures", r.failures},
                     {"min_us", r.min_us},
                     {"mean_us", r.mean_us},
                     {"median_us", r.median_us},
                     {"p95_us", r.p95_us},
                     {"max_us", r.max_us}});
    }
    nlohmann::json j{{"schema", "pq5g.bench_report/1"},
                     {"iters", iters},
                     {"clients", clients},
                     {"rows", arr}};
    if (seed) j["seed"] = *seed;
    return j;
  }
};

namespace bench_impl {

inline double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0;
  size_t idx = static_cast<size_t>(std::llround(q * double(sorted.size() - 1)));
  return sorted[std::min(idx, sorted.size() - 1)];
}

}  // namespace bench_impl

// iters rounds per (mode, level); each round runs `clients` concurrent
// client actors against one server actor on the in-process transport.
inline BenchReport run_bench(int iters, int clients,
                             std::optional<uint64_t> seed,
                             const std::vector<kem::KemMode>& modes) {
  if (iters < 1 || clients < 1)
    throw std::invalid_argument("iters and clients must be positive");

  BenchReport report;
  report.iters = iters;
  report.clients = clients;
  report.seed = seed;

  std::unique_ptr<RandomSource> rng;
  if (seed)
    rng = std::make_unique<DeterministicRandom>(*seed, "bench");
  else
    rng = std::make_unique<SystemRandom>();

  auto issuer_seed = rng->array<crypto::kEd25519SeedLen>();
  handshake::TrustAnchor root{kDemoIssuer,
                              crypto::ed25519_public_key(view(issuer_seed))};
  auto server_identity =
      workflow_impl::make_identity("bench-server", view(issuer_seed), *rng);
  auto client_identity =
      workflow_impl::make_identity("bench-client", view(issuer_seed), *rng);

  for (const auto& mode : modes) {
    handshake::ConnectionConfig server_base;
    server_base.is_client = false;
    server_base.modes = {mode};
    server_base.certificate = server_identity.certificate;
    server_base.signing_seed = server_identity.signing_seed;
    server_base.trust_anchors = {root};
    server_base.now = kDemoClock;

    handshake::ConnectionConfig client_base = server_base;
    client_base.is_client = true;
    client_base.certificate = client_identity.certificate;
    client_base.signing_seed = client_identity.signing_seed;

    BenchRow row;
    row.mode = mode;
    std::vector<double> latencies;
    for (int iter = 0; iter < iters; iter++) {
      core5g::InProcessNetwork net;
      HandshakeServerActor server("server", server_base, *rng);
      net.add_node(server);
      std::vector<std::unique_ptr<HandshakeClientActor>> actors;
      for (int c = 0; c < clients; c++) {
        actors.push_back(std::make_unique<HandshakeClientActor>(
            "client" + std::to_string(c), "server", client_base, *rng));
        net.add_node(*actors.back());
        net.add_link(actors.back()->id(), "server");
      }
      for (auto& a : actors) a->kick();
      net.run();
      for (auto& a : actors) {
        row.count++;
        if (a->complete())
          latencies.push_back(a->latency_us());
        else
          row.failures++;
      }
    }

    std::sort(latencies.begin(), latencies.end());
    if (!latencies.empty()) {
      row.min_us = latencies.front();
      row.max_us = latencies.back();
      double sum = 0;
      for (double v : latencies) sum += v;
      row.mean_us = sum / double(latencies.size());
      row.median_us = bench_impl::percentile(latencies, 0.5);
      row.p95_us = bench_impl::percentile(latencies, 0.95);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline std::vector<kem::KemMode> all_modes() {
  return {{512, false}, {768, false}, {1024, false},
          {512, true},  {768, true},  {1024, true}};
}

}  // namespace pq5g::ue
