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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pq5g/bytes.hpp"
#include "pq5g/core5g/gtpu.hpp"
#include "pq5g/core5g/packet.hpp"
#include "pq5g/keccak.hpp"

namespace pq5g::core5g {

struct SubscriberRecord {
  std::string supi;
  std::array<uint8_t, 32> k{};
  bool allowed = true;
};

struct GnbDescriptor {
  std::string id;
  std::string upf;
  uint16_t port = 0;  // 0: ephemeral (UDP transport only)
};

struct UpfDescriptor {
  std::string id;
  uint16_t port = kGtpuPort;
};

struct UeDescriptor {
  std::string id;
  std::string supi;
  std::string gnb;
  uint16_t port = 0;
};

// Demo provisioning: a stable per-supi long-term key so that topology files
// and built-in topologies agree with UE configs without sharing state.
inline std::array<uint8_t, 32> demo_subscriber_key(const std::string& supi) {
  Bytes b = crypto::shake256(to_bytes("subscriber-key|" + supi), 32);
  std::array<uint8_t, 32> k;
  std::copy(b.begin(), b.end(), k.begin());
  return k;
}

struct Topology {
  std::string name = "local";
  std::string ip_pool = "10.45.0.0/16";
  bool dn_enabled = false;
  std::vector<SubscriberRecord> subscribers;
  std::vector<GnbDescriptor> gnbs;
  std::vector<UpfDescriptor> upfs;
  std::vector<UeDescriptor> ues;
  std::string amf_id = "amf";
  std::string smf_id = "smf";
  std::string dn_id = "dn";
  uint16_t amf_port = 0;
  uint16_t smf_port = 0;
  uint16_t dn_port = 0;

  void validate() const {
    if (gnbs.empty() || upfs.empty())
      throw ParseError("topology needs at least one gNB and one UPF");
    if (dn_enabled && upfs.size() < 2)
      throw ParseError("DN topology needs two UPFs");
    auto pool = parse_ipv4_prefix(ip_pool);
    if (!pool) throw ParseError("bad ip_pool prefix: " + ip_pool);
    size_t capacity = (size_t{1} << (32 - pool->second)) - 2;
    if (capacity < subscribers.size())
      throw ParseError("ip_pool too small for subscriber count");
    for (const auto& g : gnbs) {
      if (!has_upf(g.upf))
        throw ParseError("gNB " + g.id + " references unknown UPF " + g.upf);
    }
    for (const auto& ue : ues) {
      if (!has_gnb(ue.gnb))
        throw ParseError("UE " + ue.id + " references unknown gNB " + ue.gnb);
      bool known = false;
      for (const auto& s : subscribers) known = known || s.supi == ue.supi;
      if (!known)
        throw ParseError("UE " + ue.id + " references unknown supi " + ue.supi);
    }
  }

  bool has_upf(const std::string& id) const {
    for (const auto& u : upfs)
      if (u.id == id) return true;
    return false;
  }
  bool has_gnb(const std::string& id) const {
    for (const auto& g : gnbs)
      if (g.id == id) return true;
    return false;
  }
  const UeDescriptor& ue(const std::string& id) const {
    for (const auto& u : ues)
      if (u.id == id) return u;
    throw std::invalid_argument("no such UE in topology: " + id);
  }
  std::string upf_for_gnb(const std::string& gnb_id) const {
    for (const auto& g : gnbs)
      if (g.id == gnb_id) return g.upf;
    throw std::invalid_argument("no such gNB in topology: " + gnb_id);
  }

  // Both UEs behind one gNB and one UPF; user traffic hairpins at the UPF.
  static Topology single_upf() {
    Topology t;
    t.name = "local";
    t.subscribers = {{"imsi-001010000000001", demo_subscriber_key("imsi-001010000000001"), true},
                     {"imsi-001010000000002", demo_subscriber_key("imsi-001010000000002"), true}};
    t.upfs = {{"upf1", kGtpuPort}};
    t.gnbs = {{"gnb1", "upf1", 0}};
    t.ues = {{"ue1", "imsi-001010000000001", "gnb1", 0},
             {"ue2", "imsi-001010000000002", "gnb1", 0}};
    return t;
  }

  // UEs behind different gNB/UPF pairs; user traffic crosses the DN link.
  static Topology dual_upf_dn() {
    Topology t;
    t.name = "dn";
    t.dn_enabled = true;
    t.subscribers = {{"imsi-001010000000001", demo_subscriber_key("imsi-001010000000001"), true},
                     {"imsi-001010000000002", demo_subscriber_key("imsi-001010000000002"), true}};
    t.upfs = {{"upf1", kGtpuPort}, {"upf2", kGtpuPort + 1}};
    t.gnbs = {{"gnb1", "upf1", 0}, {"gnb2", "upf2", 0}};
    t.ues = {{"ue1", "imsi-001010000000001", "gnb1", 0},
             {"ue2", "imsi-001010000000002", "gnb2", 0}};
    return t;
  }

  static Topology from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("topology JSON: ") + e.what());
    }
    try {
      Topology t;
      t.name = j.value("name", t.name);
      t.ip_pool = j.value("ip_pool", t.ip_pool);
      t.dn_enabled = j.value("dn_enabled", false);
      for (const auto& s : j.value("subscribers", nlohmann::json::array())) {
        SubscriberRecord rec;
        rec.supi = s.at("supi").get<std::string>();
        if (s.contains("k")) {
          Bytes k = from_hex(s.at("k").get<std::string>());
          if (k.size() != rec.k.size())
            throw ParseError("subscriber key must be 32 bytes of hex");
          std::copy(k.begin(), k.end(), rec.k.begin());
        } else {
          rec.k = demo_subscriber_key(rec.supi);
        }
        rec.allowed = s.value("allowed", true);
        t.subscribers.push_back(std::move(rec));
      }
      for (const auto& g : j.value("gnbs", nlohmann::json::array()))
        t.gnbs.push_back({g.at("id").get<std::string>(),
                          g.at("upf").get<std::string>(),
                          g.value("port", uint16_t{0})});
      for (const auto& u : j.value("upfs", nlohmann::json::array()))
        t.upfs.push_back({u.at("id").get<std::string>(),
                          u.value("port", kGtpuPort)});
      for (const auto& u : j.value("ues", nlohmann::json::array()))
        t.ues.push_back({u.at("id").get<std::string>(),
                         u.at("supi").get<std::string>(),
                         u.at("gnb").get<std::string>(),
                         u.value("port", uint16_t{0})});
      t.amf_port = j.value("amf_port", uint16_t{0});
      t.smf_port = j.value("smf_port", uint16_t{0});
      t.dn_port = j.value("dn_port", uint16_t{0});
      t.validate();
      return t;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("topology JSON: ") + e.what());
    }
  }

  static Topology load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open topology file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["ip_pool"] = ip_pool;
    j["dn_enabled"] = dn_enabled;
    j["subscribers"] = nlohmann::json::array();
    for (const auto& s : subscribers)
      j["subscribers"].push_back(
          {{"supi", s.supi}, {"k", to_hex(view(s.k))}, {"allowed", s.allowed}});
    j["gnbs"] = nlohmann::json::array();
    for (const auto& g : gnbs)
      j["gnbs"].push_back({{"id", g.id}, {"upf", g.upf}, {"port", g.port}});
    j["upfs"] = nlohmann::json::array();
    for (const auto& u : upfs)
      j["upfs"].push_back({{"id", u.id}, {"port", u.port}});
    j["ues"] = nlohmann::json::array();
    for (const auto& u : ues)
      j["ues"].push_back(
          {{"id", u.id}, {"supi", u.supi}, {"gnb", u.gnb}, {"port", u.port}});
    return j;
  }
};

}  // namespace pq5g::core5g
