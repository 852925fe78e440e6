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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pq5g/core5g/network.hpp"
#include "test_util.hpp"

using namespace pq5g;
using namespace pq5g::core5g;

namespace {

// Records everything it hears; optionally echoes each frame back once.
class Recorder final : public Node {
 public:
  Recorder(std::string id, bool echo = false) : Node(std::move(id)), echo_(echo) {}

  void on_frame(const std::string& from, BytesView frame) override {
    heard.emplace_back(from, Bytes(frame.begin(), frame.end()));
    if (echo_ && !frame.empty()) {
      Bytes reply(frame.begin(), frame.end());
      reply.push_back(0xee);
      if (reply.size() < 4) send(from, std::move(reply));
    }
  }

  std::vector<std::pair<std::string, Bytes>> heard;

 private:
  bool echo_;
};

}  // namespace

TEST_CASE("in-process delivery is fifo", "[network]") {
  InProcessNetwork net;
  Recorder a("a"), b("b");
  net.add_node(a);
  net.add_node(b);
  net.add_link("a", "b");

  net.send("a", "b", from_hex("01"));
  net.send("a", "b", from_hex("02"));
  net.send("a", "b", from_hex("03"));
  CHECK(b.heard.empty());  // nothing delivered before run()
  net.run();

  REQUIRE(b.heard.size() == 3);
  CHECK(b.heard[0].second == from_hex("01"));
  CHECK(b.heard[1].second == from_hex("02"));
  CHECK(b.heard[2].second == from_hex("03"));
  CHECK(b.heard[0].first == "a");
}

TEST_CASE("frames triggered by delivery are processed in arrival order",
          "[network]") {
  InProcessNetwork net;
  Recorder a("a", true), b("b", true);
  net.add_node(a);
  net.add_node(b);
  net.add_link("a", "b");

  // One byte each way; echoes grow by one byte and stop at length 4.
  net.send("a", "b", from_hex("10"));
  net.run();
  // b hears 10, echoes 10ee; a hears 10ee, echoes 10eeee; b hears 10eeee
  // and its would-be echo reaches length 4, ending the chain.
  REQUIRE(b.heard.size() == 2);
  REQUIRE(a.heard.size() == 1);
  CHECK(a.heard[0].second == from_hex("10ee"));
  CHECK(b.heard[1].second == from_hex("10eeee"));
}

TEST_CASE("sends outside declared links are refused", "[network]") {
  InProcessNetwork net;
  Recorder a("a"), b("b"), c("c");
  net.add_node(a);
  net.add_node(b);
  net.add_node(c);
  net.add_link("a", "b");

  CHECK_THROWS_AS(net.send("a", "c", from_hex("00")), std::logic_error);
  CHECK_THROWS_AS(net.send("b", "c", from_hex("00")), std::logic_error);
  CHECK_THROWS_AS(net.send("a", "nobody", from_hex("00")), std::logic_error);
  // Links are undirected.
  net.send("b", "a", from_hex("ab"));
  net.run();
  REQUIRE(a.heard.size() == 1);
}

TEST_CASE("duplicate node ids are refused", "[network]") {
  InProcessNetwork net;
  Recorder a1("dup"), a2("dup");
  net.add_node(a1);
  CHECK_THROWS_AS(net.add_node(a2), std::logic_error);
}

TEST_CASE("a detached node cannot send", "[network]") {
  class Poke final : public Node {
   public:
    using Node::Node;
    void on_frame(const std::string&, BytesView) override {}
    void try_send() { send("x", {}); }
  } p("p");
  CHECK_THROWS_AS(p.try_send(), std::logic_error);
}

TEST_CASE("taps record every frame with monotonic timestamps", "[network]") {
  InProcessNetwork net;
  Recorder a("a"), b("b");
  net.add_node(a);
  net.add_node(b);
  net.add_link("a", "b");

  net.send("a", "b", testutil::ascii("first"));
  net.send("b", "a", testutil::ascii("second"));
  net.run();

  const auto& taps = net.taps();
  REQUIRE(taps.size() == 2);
  CHECK(taps[0].from == "a");
  CHECK(taps[0].to == "b");
  CHECK(taps[0].frame == testutil::ascii("first"));
  CHECK(taps[1].from == "b");
  CHECK(taps[1].frame == testutil::ascii("second"));
  CHECK(taps[0].t_us <= taps[1].t_us);
}

TEST_CASE("the routing loop breaker trips", "[network]") {
  // Two nodes that echo unconditionally ping-pong forever.
  class Forever final : public Node {
   public:
    using Node::Node;
    void on_frame(const std::string& from, BytesView frame) override {
      send(from, Bytes(frame.begin(), frame.end()));
    }
  };
  InProcessNetwork net;
  Forever a("a"), b("b");
  net.add_node(a);
  net.add_node(b);
  net.add_link("a", "b");
  net.send("a", "b", from_hex("00"));
  CHECK_THROWS_AS(net.run(), std::runtime_error);
}

TEST_CASE("tap dump wire format", "[network]") {
  std::vector<TapEntry> entries;
  entries.push_back(TapEntry{0x0102030405060708ULL, "a", "b", from_hex("aabb")});
  entries.push_back(TapEntry{7, "b", "a", {}});

  std::string path =
      (std::filesystem::temp_directory_path() / "pq5g_tap_test.bin").string();
  write_tap_dump(path, entries);

  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  Bytes data((std::istreambuf_iterator<char>(in)),
             std::istreambuf_iterator<char>());
  CHECK(to_hex(view(data)) ==
        "010203040506070800000002aabb"
        "000000000000000700000000");
  std::remove(path.c_str());
}

TEST_CASE("udp loopback delivers between nodes", "[network]") {
  UdpNetwork net({}, 50);
  Recorder a("a"), b("b", true);
  net.add_node(a);
  net.add_node(b);
  net.add_link("a", "b");
  net.open_sockets();
  CHECK(net.port_of("a") != 0);
  CHECK(net.port_of("b") != 0);
  CHECK(net.port_of("a") != net.port_of("b"));

  net.send("a", "b", from_hex("42"));
  net.run();
  REQUIRE(b.heard.size() == 1);
  CHECK(b.heard[0].second == from_hex("42"));
  // The echo (42ee) came back to a over the socket.
  REQUIRE(a.heard.size() == 1);
  CHECK(a.heard[0].second == from_hex("42ee"));

  CHECK_THROWS_AS(net.send("a", "missing", from_hex("00")), std::logic_error);
}

TEST_CASE("udp respects preferred ports when free", "[network]") {
  UdpNetwork net({{"a", 42152}}, 50);
  Recorder a("a"), b("b");
  net.add_node(a);
  net.add_node(b);
  net.add_link("a", "b");
  net.open_sockets();
  // Either the preferred port was granted or a fallback was chosen; both
  // must yield a usable socket.
  CHECK(net.port_of("a") != 0);
  net.send("b", "a", from_hex("55"));
  net.run();
  REQUIRE(a.heard.size() == 1);
}
