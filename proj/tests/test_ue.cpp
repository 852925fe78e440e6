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

#include <catch2/catch_amalgamated.hpp>

#include "pq5g/core5g/amf.hpp"
#include "pq5g/core5g/gnb.hpp"
#include "pq5g/core5g/network.hpp"
#include "pq5g/core5g/smf.hpp"
#include "pq5g/core5g/topology.hpp"
#include "pq5g/core5g/upf.hpp"
#include "pq5g/rng.hpp"
#include "pq5g/ue/ue_node.hpp"
#include "test_util.hpp"

using namespace pq5g;
using namespace pq5g::ue;

namespace {

constexpr uint64_t kNotBefore = 0;
constexpr uint64_t kNotAfter = 1'000'000;

// A full single-cell network with two UEs, wired by hand so the test drives
// each UeNode call directly.
struct UeFixture {
  core5g::Topology topo = core5g::Topology::single_upf();
  DeterministicRandom core_rng{21, "ue core"};
  DeterministicRandom ca_rng{22, "ue ca"};
  DeterministicRandom rng1{23, "ue alpha"};
  DeterministicRandom rng2{24, "ue beta"};

  Bytes ca_seed = ca_rng.bytes(crypto::kEd25519SeedLen);
  handshake::TrustAnchor anchor{"ue-root",
                                crypto::ed25519_public_key(view(ca_seed))};

  core5g::InProcessNetwork net;
  core5g::AmfNode amf{"amf", "smf", topo.subscribers, core_rng};
  core5g::SmfNode smf{"smf", "amf", topo.ip_pool, {{"gnb1", "upf1"}}};
  core5g::UpfNode upf{"upf1", "smf"};
  core5g::GnbNode gnb{"gnb1", "amf", "upf1"};
  UeNode ue1;
  UeNode ue2;

  explicit UeFixture(kem::KemMode mode = kem::KemMode{768, true},
                     bool echo = true)
      : ue1(config("ue1", 0, true, mode, echo, rng1), rng1),
        ue2(config("ue2", 1, false, mode, echo, rng2), rng2) {
    for (core5g::Node* n : std::initializer_list<core5g::Node*>{
             &amf, &smf, &upf, &gnb, &ue1, &ue2})
      net.add_node(*n);
    net.add_link("amf", "smf");
    net.add_link("gnb1", "amf");
    net.add_link("gnb1", "upf1");
    net.add_link("smf", "upf1");
    net.add_link("ue1", "gnb1");
    net.add_link("ue2", "gnb1");
  }

  UeConfig config(const std::string& id, size_t sub, bool is_client,
                  kem::KemMode mode, bool echo, RandomSource& rng) {
    UeConfig cfg;
    cfg.id = id;
    cfg.supi = topo.subscribers[sub].supi;
    cfg.k = topo.subscribers[sub].k;
    cfg.gnb_id = "gnb1";
    cfg.is_client = is_client;
    cfg.modes = {mode};
    cfg.signing_seed = rng.array<crypto::kEd25519SeedLen>();
    cfg.certificate = handshake::issue_certificate(
        "ue-root", view(ca_seed), cfg.supi,
        crypto::ed25519_public_key(view(cfg.signing_seed)), kNotBefore,
        kNotAfter);
    cfg.trust_anchors = {anchor};
    cfg.now = 500'000;
    cfg.echo = echo;
    return cfg;
  }

  void bring_up() {
    ue1.power_on();
    ue2.power_on();
    net.run();
    REQUIRE(ue1.ready());
    REQUIRE(ue2.ready());
  }
};

}  // namespace

TEST_CASE("two ues attach, handshake, and exchange a message", "[ue]") {
  UeFixture f;
  f.bring_up();

  CHECK(core5g::format_ipv4(f.ue1.ue_ip()) == "10.45.0.2");
  CHECK(core5g::format_ipv4(f.ue2.ue_ip()) == "10.45.0.3");
  REQUIRE(f.ue1.grant().has_value());
  CHECK(f.ue1.grant()->upf_id == "upf1");

  f.ue1.connect(f.ue2.ue_ip(), testutil::ascii("over the air"));
  f.net.run();

  CHECK(f.ue1.handshake_complete());
  CHECK(f.ue2.handshake_complete());
  REQUIRE(f.ue1.negotiated_mode().has_value());
  CHECK(f.ue1.negotiated_mode()->name() == "hybrid-768-x25519");
  CHECK(f.ue2.negotiated_mode()->name() == "hybrid-768-x25519");

  // Initiator sent one message; the responder echoed it back.
  REQUIRE(f.ue1.sent_messages().size() == 1);
  CHECK(f.ue1.sent_messages()[0] == testutil::ascii("over the air"));
  REQUIRE(f.ue2.received_messages().size() == 1);
  CHECK(f.ue2.received_messages()[0] == testutil::ascii("over the air"));
  REQUIRE(f.ue1.received_messages().size() == 1);
  CHECK(f.ue1.received_messages()[0] == testutil::ascii("over the air"));

  CHECK_FALSE(f.ue1.failure().has_value());
  CHECK_FALSE(f.ue2.failure().has_value());
  CHECK(f.ue1.drops() == 0);
  CHECK(f.ue2.drops() == 0);

  auto duration = f.ue1.handshake_duration_us();
  REQUIRE(duration.has_value());
  CHECK(*duration > 0);
  CHECK_FALSE(f.ue2.handshake_duration_us().has_value());
}

TEST_CASE("event transcripts follow the expected step order", "[ue]") {
  UeFixture f;
  f.bring_up();
  f.ue1.connect(f.ue2.ue_ip(), testutil::ascii("m"));
  f.net.run();

  CHECK(transcript_orders(f.ue1.events(), expected_steps(true)));
  CHECK(transcript_orders(f.ue2.events(), expected_steps(false)));
  CHECK(first_missing_step(f.ue1.events(), true).empty());
  CHECK(first_missing_step(f.ue2.events(), false).empty());

  // Details carry human-readable context.
  const EventTranscript& ev = f.ue1.events();
  REQUIRE_FALSE(ev.empty());
  CHECK(ev[0].tag == StepTag::kRegistered);
  CHECK(ev[0].detail == "supi=" + f.topo.subscribers[0].supi);
  CHECK(ev[1].tag == StepTag::kSessionEstablished);
  CHECK(ev[1].detail.find("ip=10.45.0.2") != std::string::npos);
  CHECK(ev[2].tag == StepTag::kKeypairGenerated);
  CHECK(ev[2].detail == "modes=hybrid-768-x25519");
  for (const Event& e : ev) {
    if (e.tag != StepTag::kMessageSent && e.tag != StepTag::kMessageReceived)
      continue;
    // sha256= plus the first eight digest bytes in hex.
    CHECK(e.detail.size() == 7 + 16);
    CHECK(e.detail.substr(0, 7) == "sha256=");
  }

  // Timestamps never run backwards.
  for (size_t i = 1; i < ev.size(); i++) CHECK(ev[i].t_us >= ev[i - 1].t_us);
}

TEST_CASE("a responder with echo disabled stays quiet", "[ue]") {
  UeFixture f(kem::KemMode{768, true}, false);
  f.bring_up();
  f.ue1.connect(f.ue2.ue_ip(), testutil::ascii("one way"));
  f.net.run();

  CHECK(f.ue2.received_messages().size() == 1);
  CHECK(f.ue2.sent_messages().empty());
  CHECK(f.ue1.received_messages().empty());

  // The channel still works for explicit sends in both directions.
  f.ue2.secure_send(view(testutil::ascii("manual reply")));
  f.net.run();
  REQUIRE(f.ue1.received_messages().size() == 1);
  CHECK(f.ue1.received_messages()[0] == testutil::ascii("manual reply"));
}

TEST_CASE("ue call sequencing is enforced", "[ue]") {
  UeFixture f;

  SECTION("empty mode list is refused at construction") {
    UeConfig cfg = f.config("ue3", 0, true, kem::KemMode{512, false}, true,
                            f.rng1);
    cfg.modes.clear();
    DeterministicRandom rng(5, "modeless");
    CHECK_THROWS_AS(UeNode(cfg, rng), std::invalid_argument);
  }

  SECTION("power_on twice") {
    f.ue1.power_on();
    CHECK_THROWS_AS(f.ue1.power_on(), std::logic_error);
  }

  SECTION("connect before the session exists") {
    CHECK_THROWS_AS(f.ue1.connect(0x0a2d0003, testutil::ascii("x")),
                    std::logic_error);
  }

  SECTION("responder cannot initiate") {
    f.bring_up();
    CHECK_THROWS_AS(f.ue2.connect(f.ue1.ue_ip(), testutil::ascii("x")),
                    std::logic_error);
  }

  SECTION("secure_send before the handshake") {
    f.bring_up();
    CHECK_THROWS_AS(f.ue1.secure_send(view(testutil::ascii("x"))),
                    std::logic_error);
  }

  SECTION("connect twice") {
    f.bring_up();
    f.ue1.connect(f.ue2.ue_ip(), testutil::ascii("x"));
    f.net.run();
    REQUIRE(f.ue1.handshake_complete());
    CHECK_THROWS_AS(f.ue1.connect(f.ue2.ue_ip(), testutil::ascii("y")),
                    std::logic_error);
  }
}

TEST_CASE("roles can swap only while no connection is live", "[ue]") {
  UeFixture f;
  f.bring_up();

  SECTION("config-level swap is an involution") {
    UeConfig a = f.config("a", 0, true, kem::KemMode{512, false}, true, f.rng1);
    UeConfig b = f.config("b", 1, false, kem::KemMode{512, false}, true, f.rng2);
    swap_roles(a, b);
    CHECK_FALSE(a.is_client);
    CHECK(b.is_client);
    swap_roles(a, b);
    CHECK(a.is_client);
    CHECK_FALSE(b.is_client);
  }

  SECTION("node-level swap flips the initiator") {
    UeNode::swap_roles(f.ue1, f.ue2);
    CHECK_FALSE(f.ue1.config().is_client);
    CHECK(f.ue2.config().is_client);

    f.ue2.connect(f.ue1.ue_ip(), testutil::ascii("reversed"));
    f.net.run();
    CHECK(f.ue2.handshake_complete());
    REQUIRE(f.ue1.received_messages().size() == 1);
    CHECK(f.ue1.received_messages()[0] == testutil::ascii("reversed"));
    CHECK(transcript_orders(f.ue2.events(), expected_steps(true)));
    CHECK(transcript_orders(f.ue1.events(), expected_steps(false)));
  }

  SECTION("swap is refused while connected") {
    f.ue1.connect(f.ue2.ue_ip(), testutil::ascii("x"));
    f.net.run();
    REQUIRE(f.ue1.handshake_complete());
    CHECK_THROWS_AS(UeNode::swap_roles(f.ue1, f.ue2), std::logic_error);
  }
}

TEST_CASE("a disallowed subscriber fails at registration", "[ue]") {
  core5g::Topology topo = core5g::Topology::single_upf();
  topo.subscribers[0].allowed = false;

  DeterministicRandom core_rng(31, "barred core");
  DeterministicRandom ue_rng(32, "barred ue");
  DeterministicRandom ca_rng(33, "barred ca");
  Bytes ca_seed = ca_rng.bytes(crypto::kEd25519SeedLen);

  core5g::InProcessNetwork net;
  core5g::AmfNode amf("amf", "smf", topo.subscribers, core_rng);
  core5g::GnbNode gnb("gnb1", "amf", "upf1");

  UeConfig cfg;
  cfg.id = "ue1";
  cfg.supi = topo.subscribers[0].supi;
  cfg.k = topo.subscribers[0].k;
  cfg.gnb_id = "gnb1";
  cfg.is_client = true;
  cfg.modes = {kem::KemMode{768, true}};
  cfg.signing_seed = ue_rng.array<crypto::kEd25519SeedLen>();
  cfg.certificate = handshake::issue_certificate(
      "ue-root", view(ca_seed), cfg.supi,
      crypto::ed25519_public_key(view(cfg.signing_seed)), 0, 1'000'000);
  cfg.trust_anchors = {handshake::TrustAnchor{
      "ue-root", crypto::ed25519_public_key(view(ca_seed))}};
  cfg.now = 500'000;
  UeNode ue(cfg, ue_rng);

  net.add_node(amf);
  net.add_node(gnb);
  net.add_node(ue);
  net.add_link("gnb1", "amf");
  net.add_link("ue1", "gnb1");

  ue.power_on();
  net.run();

  CHECK(ue.state() == UeState::kFailed);
  CHECK_FALSE(ue.ready());
  REQUIRE(ue.failure().has_value());
  CHECK(ue.failure()->step == StepTag::kRegistered);
  CHECK(ue.failure()->detail == "unknown_subscriber");
  CHECK(first_missing_step(ue.events(), true) == "Registered");
}

TEST_CASE("a session rejection fails the session step", "[ue]") {
  core5g::Topology topo = core5g::Topology::single_upf();
  DeterministicRandom core_rng(41, "rejected core");
  DeterministicRandom ue_rng(42, "rejected ue");
  DeterministicRandom ca_rng(43, "rejected ca");
  Bytes ca_seed = ca_rng.bytes(crypto::kEd25519SeedLen);

  core5g::InProcessNetwork net;
  core5g::AmfNode amf("amf", "smf", topo.subscribers, core_rng);
  // The SMF serves a different cell, so session setup has no UPF to use.
  core5g::SmfNode smf("smf", "amf", topo.ip_pool, {{"gnb-far", "upf1"}});
  core5g::GnbNode gnb("gnb1", "amf", "upf1");

  UeConfig cfg;
  cfg.id = "ue1";
  cfg.supi = topo.subscribers[0].supi;
  cfg.k = topo.subscribers[0].k;
  cfg.gnb_id = "gnb1";
  cfg.is_client = true;
  cfg.modes = {kem::KemMode{768, true}};
  cfg.signing_seed = ue_rng.array<crypto::kEd25519SeedLen>();
  cfg.certificate = handshake::issue_certificate(
      "ue-root", view(ca_seed), cfg.supi,
      crypto::ed25519_public_key(view(cfg.signing_seed)), 0, 1'000'000);
  cfg.trust_anchors = {handshake::TrustAnchor{
      "ue-root", crypto::ed25519_public_key(view(ca_seed))}};
  cfg.now = 500'000;
  UeNode ue(cfg, ue_rng);

  net.add_node(amf);
  net.add_node(smf);
  net.add_node(gnb);
  net.add_node(ue);
  net.add_link("amf", "smf");
  net.add_link("gnb1", "amf");
  net.add_link("ue1", "gnb1");

  ue.power_on();
  net.run();

  CHECK(ue.state() == UeState::kFailed);
  REQUIRE(ue.failure().has_value());
  CHECK(ue.failure()->step == StepTag::kSessionEstablished);
  CHECK(ue.failure()->detail == "no_upf_for_gnb");
  CHECK(first_missing_step(ue.events(), true) == "SessionEstablished");
  CHECK(transcript_reaches(ue.events(), StepTag::kRegistered));
}

TEST_CASE("an untrusted peer certificate fails the handshake step", "[ue]") {
  UeFixture f;
  // Re-key the responder under a CA the initiator does not trust.
  DeterministicRandom rogue_rng(51, "rogue ca");
  Bytes rogue_seed = rogue_rng.bytes(crypto::kEd25519SeedLen);
  UeConfig cfg = f.config("ue2", 1, false, kem::KemMode{768, true}, true,
                          f.rng2);
  cfg.certificate = handshake::issue_certificate(
      "rogue-root", view(rogue_seed), cfg.supi,
      crypto::ed25519_public_key(view(cfg.signing_seed)), kNotBefore,
      kNotAfter);

  core5g::Topology topo = core5g::Topology::single_upf();
  DeterministicRandom core_rng(52, "rogue core");
  DeterministicRandom rng1(53, "rogue ue1");
  DeterministicRandom rng2(54, "rogue ue2");
  core5g::InProcessNetwork net;
  core5g::AmfNode amf("amf", "smf", topo.subscribers, core_rng);
  core5g::SmfNode smf("smf", "amf", topo.ip_pool, {{"gnb1", "upf1"}});
  core5g::UpfNode upf("upf1", "smf");
  core5g::GnbNode gnb("gnb1", "amf", "upf1");
  UeNode ue1(f.config("ue1", 0, true, kem::KemMode{768, true}, true, rng1),
             rng1);
  UeNode ue2(cfg, rng2);
  for (core5g::Node* n : std::initializer_list<core5g::Node*>{
           &amf, &smf, &upf, &gnb, &ue1, &ue2})
    net.add_node(*n);
  net.add_link("amf", "smf");
  net.add_link("gnb1", "amf");
  net.add_link("gnb1", "upf1");
  net.add_link("smf", "upf1");
  net.add_link("ue1", "gnb1");
  net.add_link("ue2", "gnb1");

  ue1.power_on();
  ue2.power_on();
  net.run();
  REQUIRE(ue1.ready());
  REQUIRE(ue2.ready());

  ue1.connect(ue2.ue_ip(), testutil::ascii("will not arrive"));
  net.run();

  CHECK_FALSE(ue1.handshake_complete());
  CHECK_FALSE(ue2.handshake_complete());
  REQUIRE(ue1.failure().has_value());
  CHECK(ue1.failure()->step == StepTag::kHandshakeComplete);
  CHECK(ue1.failure()->detail.find("certificate rejected: unknown_issuer") !=
        std::string::npos);
  // The responder learns of the failure from the initiator's alert.
  REQUIRE(ue2.failure().has_value());
  CHECK(ue2.failure()->detail.find("alert") != std::string::npos);
  CHECK(ue1.sent_messages().empty());
  CHECK(ue2.received_messages().empty());
}

TEST_CASE("a ready ue drops stray traffic", "[ue]") {
  UeFixture f;
  f.bring_up();

  // Reuse the gnb link to push frames the UE must ignore.
  core5g::InnerPacket wrong_dst{f.ue2.ue_ip(), f.ue1.ue_ip() + 100,
                                testutil::ascii("lost")};
  f.ue1.on_frame("gnb1", view(core5g::ctrl_frame(
                             core5g::CtrlType::kUserData,
                             core5g::pack_inner(wrong_dst))));
  CHECK(f.ue1.drops() == 1);

  // Payload shorter than the port header.
  core5g::InnerPacket short_payload{f.ue2.ue_ip(), f.ue1.ue_ip(), {0x01}};
  f.ue1.on_frame("gnb1", view(core5g::ctrl_frame(
                             core5g::CtrlType::kUserData,
                             core5g::pack_inner(short_payload))));
  CHECK(f.ue1.drops() == 2);

  // Not a control frame at all.
  f.ue1.on_frame("gnb1", view(testutil::ascii("static noise")));
  CHECK(f.ue1.drops() == 3);

  // A control type a UE never consumes.
  f.ue1.on_frame("gnb1", view(core5g::ctrl_frame(
                             core5g::CtrlType::kRegistrationRequest,
                             core5g::supi_body("imsi-x"))));
  CHECK(f.ue1.drops() == 4);

  CHECK_FALSE(f.ue1.failure().has_value());
  CHECK(f.ue1.ready());
}
