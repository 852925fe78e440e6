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

#include <arpa/inet.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pq5g/bytes.hpp"

namespace pq5g::core5g {

class Network;

// A network function (or UE) attached to the simulated network. Each node is
// a sequential actor: on_frame is never reentered, and nodes interact only
// by message passing.
class Node {
 public:
  explicit Node(std::string id) : id_(std::move(id)) {}
  virtual ~Node() = default;

  const std::string& id() const { return id_; }
  virtual void on_frame(const std::string& from, BytesView frame) = 0;

  void set_network(Network* net) { net_ = net; }

 protected:
  void send(const std::string& to, Bytes frame);

  std::string id_;
  Network* net_ = nullptr;
};

struct TapEntry {
  uint64_t t_us;
  std::string from;
  std::string to;
  Bytes frame;
};

// Transport between nodes. Only declared links may carry frames; taps record
// every frame for offline inspection.
class Network {
 public:
  Network() : epoch_(std::chrono::steady_clock::now()) {}
  virtual ~Network() = default;

  void add_node(Node& node) {
    if (nodes_.count(node.id()))
      throw std::logic_error("duplicate node id " + node.id());
    nodes_[node.id()] = &node;
    node.set_network(this);
  }

  void add_link(const std::string& a, const std::string& b) {
    links_.insert(link_key(a, b));
  }

  bool linked(const std::string& a, const std::string& b) const {
    return links_.count(link_key(a, b)) > 0;
  }

  virtual void send(const std::string& from, const std::string& to, Bytes frame) = 0;

  // Delivers until the network is quiescent.
  virtual void run() = 0;

  const std::vector<TapEntry>& taps() const { return taps_; }

  uint64_t now_us() const {
    return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                     std::chrono::steady_clock::now() - epoch_)
                                     .count());
  }

 protected:
  static std::pair<std::string, std::string> link_key(const std::string& a,
                                                      const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  void check_send(const std::string& from, const std::string& to) const {
    if (!nodes_.count(to)) throw std::logic_error("unknown node " + to);
    if (!linked(from, to))
      throw std::logic_error("no link between " + from + " and " + to);
  }

  std::map<std::string, Node*> nodes_;
  std::set<std::pair<std::string, std::string>> links_;
  std::vector<TapEntry> taps_;
  std::chrono::steady_clock::time_point epoch_;
};

inline void Node::send(const std::string& to, Bytes frame) {
  if (net_ == nullptr) throw std::logic_error("node " + id_ + " is detached");
  net_->send(id_, to, std::move(frame));
}

// Deterministic single-threaded FIFO delivery. With seeded randomness, runs
// are bit-reproducible.
class InProcessNetwork final : public Network {
 public:
  void send(const std::string& from, const std::string& to, Bytes frame) override {
    check_send(from, to);
    queue_.push_back({from, to, std::move(frame)});
  }

  void run() override {
    size_t steps = 0;
    while (!queue_.empty()) {
      if (++steps > kMaxSteps)
        throw std::runtime_error("network did not quiesce (routing loop?)");
      Pending p = std::move(queue_.front());
      queue_.pop_front();
      taps_.push_back(TapEntry{now_us(), p.from, p.to, p.frame});
      nodes_.at(p.to)->on_frame(p.from, p.frame);
    }
  }

 private:
  static constexpr size_t kMaxSteps = 1 << 20;

  struct Pending {
    std::string from, to;
    Bytes frame;
  };
  std::deque<Pending> queue_;
};

// Loopback UDP transport: one socket per node, frames as datagrams. run()
// returns after the sockets stay idle for idle_ms.
class UdpNetwork final : public Network {
 public:
  explicit UdpNetwork(std::map<std::string, uint16_t> preferred_ports = {},
                      int idle_ms = 100)
      : preferred_ports_(std::move(preferred_ports)), idle_ms_(idle_ms) {}

  ~UdpNetwork() override {
    for (auto& [id, sock] : sockets_) close(sock.fd);
  }

  void open_sockets() {
    for (auto& [id, node] : nodes_) {
      (void)node;
      Socket sock;
      sock.fd = ::socket(AF_INET, SOCK_DGRAM, 0);
      if (sock.fd < 0) throw std::runtime_error("socket() failed");
      sockaddr_in addr{};
      addr.sin_family = AF_INET;
      addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
      auto it = preferred_ports_.find(id);
      addr.sin_port = htons(it == preferred_ports_.end() ? 0 : it->second);
      if (bind(sock.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        // Preferred port taken: fall back to an ephemeral one.
        addr.sin_port = 0;
        if (bind(sock.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
          throw std::runtime_error("bind() failed for node " + id);
      }
      socklen_t len = sizeof(addr);
      getsockname(sock.fd, reinterpret_cast<sockaddr*>(&addr), &len);
      sock.port = ntohs(addr.sin_port);
      port_to_node_[sock.port] = id;
      sockets_[id] = sock;
    }
  }

  uint16_t port_of(const std::string& id) const { return sockets_.at(id).port; }

  void send(const std::string& from, const std::string& to, Bytes frame) override {
    check_send(from, to);
    if (sockets_.empty()) open_sockets();
    taps_.push_back(TapEntry{now_us(), from, to, frame});
    sockaddr_in dst{};
    dst.sin_family = AF_INET;
    dst.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    dst.sin_port = htons(sockets_.at(to).port);
    ssize_t sent = sendto(sockets_.at(from).fd, frame.data(), frame.size(), 0,
                          reinterpret_cast<sockaddr*>(&dst), sizeof(dst));
    if (sent < 0 || static_cast<size_t>(sent) != frame.size())
      throw std::runtime_error("sendto() failed from " + from + " to " + to);
  }

  void run() override {
    if (sockets_.empty()) open_sockets();
    std::vector<pollfd> fds;
    std::vector<std::string> owner;
    for (auto& [id, sock] : sockets_) {
      fds.push_back(pollfd{sock.fd, POLLIN, 0});
      owner.push_back(id);
    }
    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(30);
    while (std::chrono::steady_clock::now() < deadline) {
      int ready = ::poll(fds.data(), fds.size(), idle_ms_);
      if (ready < 0) throw std::runtime_error("poll() failed");
      if (ready == 0) return;  // idle: quiescent
      for (size_t i = 0; i < fds.size(); i++) {
        if (!(fds[i].revents & POLLIN)) continue;
        uint8_t buf[65536];
        sockaddr_in src{};
        socklen_t src_len = sizeof(src);
        ssize_t n = recvfrom(fds[i].fd, buf, sizeof(buf), 0,
                             reinterpret_cast<sockaddr*>(&src), &src_len);
        if (n < 0) continue;
        auto from_it = port_to_node_.find(ntohs(src.sin_port));
        if (from_it == port_to_node_.end()) continue;  // stray datagram
        nodes_.at(owner[i])->on_frame(from_it->second,
                                      BytesView(buf, static_cast<size_t>(n)));
      }
    }
    throw std::runtime_error("udp network did not quiesce within 30s");
  }

 private:
  struct Socket {
    int fd = -1;
    uint16_t port = 0;
  };
  std::map<std::string, uint16_t> preferred_ports_;
  int idle_ms_;
  std::map<std::string, Socket> sockets_;
  std::map<uint16_t, std::string> port_to_node_;
};

// Binary tap dump, one file per link: per frame, 8-byte big-endian monotonic
// timestamp (microseconds), 4-byte big-endian length, frame bytes.
inline void write_tap_dump(const std::string& path,
                           const std::vector<TapEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open tap dump " + path);
  for (const auto& e : entries) {
    Bytes rec;
    append_u64be(rec, e.t_us);
    append_u32be(rec, static_cast<uint32_t>(e.frame.size()));
    append(rec, e.frame);
    out.write(reinterpret_cast<const char*>(rec.data()),
              static_cast<std::streamsize>(rec.size()));
  }
}

}  // namespace pq5g::core5g
