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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pq5g/core5g/amf.hpp"
#include "pq5g/core5g/gnb.hpp"
#include "pq5g/core5g/network.hpp"
#include "pq5g/core5g/smf.hpp"
#include "pq5g/core5g/topology.hpp"
#include "pq5g/core5g/upf.hpp"
#include "pq5g/handshake/certificate.hpp"
#include "pq5g/rng.hpp"
#include "pq5g/ue/events.hpp"
#include "pq5g/ue/ue_node.hpp"

namespace pq5g::ue {

inline constexpr int64_t kDemoClock = 1755302400;  // fixed validation clock
inline constexpr const char* kDemoIssuer = "pq5g-root";

struct WorkflowOptions {
  kem::KemMode mode;
  Bytes message;
  std::optional<uint64_t> seed;   // deterministic run when set
  bool use_udp = false;
  bool swap = false;              // second UE initiates instead of the first
  bool echo = true;
};

struct UeReport {
  std::string id;
  std::string supi;
  std::string role;
  std::string ip;
  EventTranscript events;
};

struct DemoResult {
  bool success = false;
  std::string failing_step;    // empty on success
  std::string failing_detail;  // empty on success
  std::string mode;
  std::string topology;
  std::string transport;
  uint64_t handshake_duration_us = 0;
  UeReport initiator;
  UeReport responder;
  std::vector<std::string> message_digests;  // sha256 per app message, in order

  nlohmann::json to_json() const {
    auto events_json = [](const EventTranscript& events) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& e : events)
        arr.push_back({{"step", step_name(e.tag)},
                       {"t_us", e.t_us},
                       {"detail", e.detail}});
      return arr;
    };
    auto ue_json = [&](const UeReport& r) {
      return nlohmann::json{{"id", r.id},
                            {"supi", r.supi},
                            {"role", r.role},
                            {"ip", r.ip},
                            {"events", events_json(r.events)}};
    };
    return nlohmann::json{{"success", success},
                          {"failing_step", failing_step},
                          {"failing_detail", failing_detail},
                          {"mode", mode},
                          {"topology", topology},
                          {"transport", transport},
                          {"handshake_duration_us", handshake_duration_us},
                          {"initiator", ue_json(initiator)},
                          {"responder", ue_json(responder)},
                          {"message_digests", message_digests}};
  }
};

struct WorkflowRun {
  DemoResult result;
  std::vector<core5g::TapEntry> taps;
  std::vector<std::pair<std::string, std::string>> links;  // tapped link names
};

namespace workflow_impl {

struct Identity {
  handshake::Certificate certificate;
  std::array<uint8_t, crypto::kEd25519SeedLen> signing_seed{};
};

inline Identity make_identity(const std::string& supi,
                              BytesView issuer_seed,
                              RandomSource& rng) {
  Identity id;
  id.signing_seed = rng.array<crypto::kEd25519SeedLen>();
  id.certificate = handshake::issue_certificate(
      kDemoIssuer, issuer_seed, supi,
      crypto::ed25519_public_key(view(id.signing_seed)), kDemoClock - 3600,
      kDemoClock + 86400);
  return id;
}

}  // namespace workflow_impl

// Runs the full two-UE workflow on one simulated network: registration,
// session establishment, key exchange over the user plane, then one
// application message and its echo.
inline WorkflowRun run_workflow(const core5g::Topology& topo,
                                const WorkflowOptions& opts) {
  topo.validate();
  if (topo.ues.size() < 2)
    throw std::invalid_argument("workflow needs two ues in the topology");

  // Independent deterministic streams per party when seeded.
  std::vector<std::unique_ptr<RandomSource>> rng_store;
  auto next_rng = [&](std::string_view label) -> RandomSource& {
    if (opts.seed)
      rng_store.push_back(std::make_unique<DeterministicRandom>(*opts.seed, label));
    else
      rng_store.push_back(std::make_unique<SystemRandom>());
    return *rng_store.back();
  };

  RandomSource& ca_rng = next_rng("ca");
  auto issuer_seed = ca_rng.array<crypto::kEd25519SeedLen>();
  handshake::TrustAnchor root{kDemoIssuer,
                              crypto::ed25519_public_key(view(issuer_seed))};

  const core5g::UeDescriptor& first = topo.ues[0];
  const core5g::UeDescriptor& second = topo.ues[1];
  const core5g::UeDescriptor& init_desc = opts.swap ? second : first;
  const core5g::UeDescriptor& resp_desc = opts.swap ? first : second;

  auto make_ue_config = [&](const core5g::UeDescriptor& desc, bool is_client,
                            RandomSource& rng) {
    UeConfig cfg;
    cfg.id = desc.id;
    cfg.supi = desc.supi;
    cfg.gnb_id = desc.gnb;
    for (const auto& s : topo.subscribers)
      if (s.supi == desc.supi) cfg.k = s.k;
    cfg.is_client = is_client;
    cfg.modes = {opts.mode};
    auto identity = workflow_impl::make_identity(desc.supi, view(issuer_seed), rng);
    cfg.certificate = identity.certificate;
    cfg.signing_seed = identity.signing_seed;
    cfg.trust_anchors = {root};
    cfg.now = kDemoClock;
    cfg.echo = opts.echo;
    return cfg;
  };

  RandomSource& core_rng = next_rng("core");
  RandomSource& init_rng = next_rng("ue-initiator");
  RandomSource& resp_rng = next_rng("ue-responder");

  std::map<std::string, uint16_t> preferred;
  preferred[topo.amf_id] = topo.amf_port;
  preferred[topo.smf_id] = topo.smf_port;
  for (const auto& u : topo.upfs) preferred[u.id] = u.port;
  for (const auto& g : topo.gnbs) preferred[g.id] = g.port;
  for (const auto& u : topo.ues) preferred[u.id] = u.port;
  if (topo.dn_enabled) preferred[topo.dn_id] = topo.dn_port;

  std::unique_ptr<core5g::Network> net;
  if (opts.use_udp)
    net = std::make_unique<core5g::UdpNetwork>(std::move(preferred));
  else
    net = std::make_unique<core5g::InProcessNetwork>();

  std::map<std::string, std::string> gnb_to_upf;
  for (const auto& g : topo.gnbs) gnb_to_upf[g.id] = g.upf;

  core5g::AmfNode amf(topo.amf_id, topo.smf_id, topo.subscribers, core_rng);
  core5g::SmfNode smf(topo.smf_id, topo.amf_id, topo.ip_pool, gnb_to_upf);
  std::vector<std::unique_ptr<core5g::GnbNode>> gnbs;
  for (const auto& g : topo.gnbs)
    gnbs.push_back(std::make_unique<core5g::GnbNode>(g.id, topo.amf_id, g.upf));
  std::vector<std::unique_ptr<core5g::UpfNode>> upfs;
  for (const auto& u : topo.upfs)
    upfs.push_back(std::make_unique<core5g::UpfNode>(
        u.id, topo.smf_id, topo.dn_enabled ? topo.dn_id : ""));
  std::unique_ptr<core5g::DnNode> dn;
  if (topo.dn_enabled) {
    std::vector<std::string> upf_ids;
    for (const auto& u : topo.upfs) upf_ids.push_back(u.id);
    dn = std::make_unique<core5g::DnNode>(topo.dn_id, upf_ids);
  }
  UeNode initiator(make_ue_config(init_desc, true, init_rng), init_rng);
  UeNode responder(make_ue_config(resp_desc, false, resp_rng), resp_rng);

  net->add_node(amf);
  net->add_node(smf);
  for (auto& g : gnbs) net->add_node(*g);
  for (auto& u : upfs) net->add_node(*u);
  if (dn) net->add_node(*dn);
  net->add_node(initiator);
  net->add_node(responder);

  WorkflowRun run;
  auto note_link = [&](const std::string& a, const std::string& b) {
    net->add_link(a, b);
    run.links.emplace_back(a, b);
  };
  note_link(topo.amf_id, topo.smf_id);
  for (const auto& g : topo.gnbs) {
    note_link(g.id, topo.amf_id);
    note_link(g.id, g.upf);
  }
  for (const auto& u : topo.upfs) {
    note_link(topo.smf_id, u.id);
    if (dn) note_link(u.id, topo.dn_id);
  }
  note_link(initiator.id(), initiator.config().gnb_id);
  note_link(responder.id(), responder.config().gnb_id);

  initiator.power_on();
  responder.power_on();
  net->run();

  if (initiator.ready() && responder.ready()) {
    initiator.connect(responder.ue_ip(), opts.message);
    net->run();
  }

  DemoResult& result = run.result;
  result.mode = opts.mode.name();
  result.topology = topo.name;
  result.transport = opts.use_udp ? "udp" : "in-process";
  result.initiator = UeReport{initiator.id(), initiator.config().supi,
                              "initiator", core5g::format_ipv4(initiator.ue_ip()),
                              initiator.events()};
  result.responder = UeReport{responder.id(), responder.config().supi,
                              "responder", core5g::format_ipv4(responder.ue_ip()),
                              responder.events()};
  if (auto d = initiator.handshake_duration_us()) result.handshake_duration_us = *d;
  for (const auto& m : initiator.sent_messages())
    result.message_digests.push_back(to_hex(view(crypto::sha256(view(m)))));

  bool echoed = !opts.echo || (!initiator.received_messages().empty() &&
                               initiator.received_messages()[0] == opts.message);
  std::string init_missing = first_missing_step(initiator.events(), true);
  std::string resp_missing = first_missing_step(responder.events(), false);
  if (!opts.echo) {
    // Without the echo the initiator never observes MessageReceived and the
    // responder never sends; trim those expectations.
    if (init_missing == step_name(StepTag::kMessageReceived)) init_missing.clear();
    if (resp_missing == step_name(StepTag::kMessageSent)) resp_missing.clear();
  }

  if (initiator.failure()) {
    result.failing_step = step_name(initiator.failure()->step);
    result.failing_detail = initiator.failure()->detail;
  } else if (responder.failure()) {
    result.failing_step = step_name(responder.failure()->step);
    result.failing_detail = responder.failure()->detail;
  } else if (!init_missing.empty()) {
    result.failing_step = init_missing;
    result.failing_detail = "initiator did not reach this step";
  } else if (!resp_missing.empty()) {
    result.failing_step = resp_missing;
    result.failing_detail = "responder did not reach this step";
  } else if (!echoed) {
    result.failing_step = step_name(StepTag::kMessageReceived);
    result.failing_detail = "echo did not match the sent message";
  }
  result.success = result.failing_step.empty();
  if (auto m = initiator.negotiated_mode()) result.mode = m->name();

  run.taps = net->taps();
  return run;
}

}  // namespace pq5g::ue
