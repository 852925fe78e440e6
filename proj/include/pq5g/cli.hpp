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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pq5g/fuzz.hpp"
#include "pq5g/kem/kat.hpp"
#include "pq5g/ue/bench.hpp"
#include "pq5g/ue/workflow.hpp"

namespace pq5g::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct DemoOptions {
  int level = 768;
  bool hybrid = true;
  bool dn = false;
  std::optional<uint64_t> seed;
  std::string topology_path;  // empty: PQ5G_TOPOLOGY, then built-in
  std::string output_path = "demo_result.json";
  bool swap = false;
  std::string message = "hello over pq5g";
  bool udp = false;
  std::string taps_dir;  // empty: no link dumps
};

struct KatOptions {
  std::vector<std::string> files;
};

struct BenchOptions {
  int iters = 100;
  int clients = 1;
  std::optional<uint64_t> seed;
  std::string output_path;
  std::optional<int> level;     // restrict rows when set
  std::optional<bool> hybrid;   // restrict rows when set
};

struct FuzzOptions {
  int iters = 100;
  std::optional<uint64_t> seed;
};

namespace cli_impl {

inline std::string sanitize_filename(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
      c = '_';
  return out;
}

inline bool write_text_file(const std::string& path, const std::string& text,
                            std::ostream& err) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return f.good();
}

inline core5g::Topology resolve_topology(const DemoOptions& opts) {
  std::string path = opts.topology_path;
  if (path.empty()) {
    const char* env = std::getenv("PQ5G_TOPOLOGY");
    if (env != nullptr && *env != '\0') path = env;
  }
  if (!path.empty()) return core5g::Topology::load(path);
  return opts.dn ? core5g::Topology::dual_upf_dn() : core5g::Topology::single_upf();
}

inline void write_link_dumps(const ue::WorkflowRun& run, const std::string& dir,
                             std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir << ": " << ec.message() << "\n";
    return;
  }
  for (const auto& [a, b] : run.links) {
    std::vector<core5g::TapEntry> entries;
    for (const auto& t : run.taps)
      if ((t.from == a && t.to == b) || (t.from == b && t.to == a))
        entries.push_back(t);
    std::string name = sanitize_filename(a) + "__" + sanitize_filename(b) + ".tap";
    core5g::write_tap_dump((std::filesystem::path(dir) / name).string(), entries);
  }
}

}  // namespace cli_impl

inline int cmd_demo(const DemoOptions& opts, std::ostream& out,
                    std::ostream& err) {
  core5g::Topology topo;
  try {
    topo = cli_impl::resolve_topology(opts);
    topo.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  ue::WorkflowOptions wopts;
  wopts.mode = kem::KemMode{opts.level, opts.hybrid};
  wopts.message = to_bytes(opts.message);
  wopts.seed = opts.seed;
  wopts.use_udp = opts.udp;
  wopts.swap = opts.swap;

  ue::WorkflowRun run;
  try {
    run = ue::run_workflow(topo, wopts);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  const ue::DemoResult& result = run.result;

  out << "topology " << result.topology << " (" << result.transport
      << "), mode " << result.mode << "\n";
  struct Line {
    uint64_t t_us;
    size_t order;
    std::string text;
  };
  std::vector<Line> lines;
  auto add_lines = [&](const ue::UeReport& r) {
    for (const auto& e : r.events) {
      std::string text = r.id + " (" + r.role + "): " + ue::step_name(e.tag);
      if (!e.detail.empty()) text += " [" + e.detail + "]";
      lines.push_back(Line{e.t_us, lines.size(), std::move(text)});
    }
  };
  add_lines(result.initiator);
  add_lines(result.responder);
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.t_us != b.t_us ? a.t_us < b.t_us : a.order < b.order;
  });
  for (const auto& l : lines) out << "  " << l.text << "\n";

  if (result.success) {
    out << "demo succeeded: handshake " << result.handshake_duration_us
        << " us, " << result.message_digests.size() << " message(s)\n";
  } else {
    out << "demo FAILED at step " << result.failing_step << ": "
        << result.failing_detail << "\n";
  }

  nlohmann::json j = result.to_json();
  j["schema"] = "pq5g.demo_result/1";
  j["message"] = opts.message;
  if (opts.seed) j["seed"] = *opts.seed;
  if (!opts.output_path.empty()) {
    if (!cli_impl::write_text_file(opts.output_path, j.dump(2) + "\n", err))
      return kExitRuntime;
    out << "result written to " << opts.output_path << "\n";
  } else {
    out << j.dump(2) << "\n";
  }
  if (!opts.taps_dir.empty()) cli_impl::write_link_dumps(run, opts.taps_dir, err);

  return result.success ? kExitOk : kExitRuntime;
}

inline int cmd_kat(const KatOptions& opts, std::ostream& out,
                   std::ostream& err) {
  if (opts.files.empty()) {
    err << "error: no KAT files given\n";
    return kExitUsage;
  }
  size_t total_mismatches = 0;
  for (const auto& path : opts.files) {
    kem::KatFile file;
    try {
      file = kem::load_kat_file(path);
    } catch (const ParseError& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      return kExitUsage;
    }
    kem::KatOutcome outcome;
    try {
      outcome = kem::run_kat(file);
    } catch (const std::exception& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      return kExitUsage;
    }
    if (outcome.ok()) {
      out << path << ": level=" << outcome.level
          << " vectors=" << outcome.vectors_run << " checks=" << outcome.checks
          << " ok\n";
    } else {
      for (const auto& m : outcome.mismatches) {
        out << path << ": vector " << m.vector_index << " field " << m.field
            << ": first differing byte at offset " << m.byte_offset
            << " (expected " << m.expected_hex << ", actual " << m.actual_hex
            << ")\n";
      }
      total_mismatches += outcome.mismatches.size();
    }
  }
  return total_mismatches == 0 ? kExitOk : kExitRuntime;
}

inline int cmd_bench(const BenchOptions& opts, std::ostream& out,
                     std::ostream& err) {
  std::vector<kem::KemMode> modes;
  for (const auto& m : ue::all_modes()) {
    if (opts.level && m.level != *opts.level) continue;
    if (opts.hybrid && m.hybrid != *opts.hybrid) continue;
    modes.push_back(m);
  }

  ue::BenchReport report;
  try {
    report = ue::run_bench(opts.iters, opts.clients, opts.seed, modes);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }

  out << std::left << std::setw(22) << "mode" << std::right << std::setw(8)
      << "count" << std::setw(10) << "fail" << std::setw(12) << "mean_us"
      << std::setw(12) << "median_us" << std::setw(12) << "p95_us" << "\n";
  for (const auto& r : report.rows) {
    out << std::left << std::setw(22) << r.mode.name() << std::right
        << std::setw(8) << r.count << std::setw(10) << r.failures
        << std::setw(12) << std::fixed << std::setprecision(1) << r.mean_us
        << std::setw(12) << r.median_us << std::setw(12) << r.p95_us << "\n";
  }

  if (!opts.output_path.empty()) {
    if (!cli_impl::write_text_file(opts.output_path,
                                   report.to_json().dump(2) + "\n", err))
      return kExitRuntime;
    out << "report written to " << opts.output_path << "\n";
  }
  if (report.total_failures() > 0) {
    err << "error: " << report.total_failures() << " handshake failure(s)\n";
    return kExitRuntime;
  }
  return kExitOk;
}

inline int cmd_fuzz(const FuzzOptions& opts, std::ostream& out,
                    std::ostream& err) {
  fuzz::FuzzOutcome outcome;
  try {
    outcome = fuzz::run_fuzz(opts.iters, opts.seed);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  out << "fuzz: iterations=" << outcome.iterations
      << " parser_calls=" << outcome.parser_calls
      << " rejected=" << outcome.rejected << " accepted=" << outcome.accepted
      << " violations=" << outcome.violations.size() << "\n";
  for (const auto& v : outcome.violations) err << "violation: " << v << "\n";
  return outcome.ok() ? kExitOk : kExitRuntime;
}

}  // namespace pq5g::cli
