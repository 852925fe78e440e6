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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pq5g/cli.hpp"

namespace {

constexpr const char* kDescription =
    "Desk-scale simulator of quantum-safe UE-to-UE communication over a "
    "software 5G core";

int run(int argc, char** argv) {
  using namespace pq5g::cli;

  CLI::App app{kDescription, "pq5g"};
  app.require_subcommand(1);

  DemoOptions demo;
  KatOptions kat;
  BenchOptions bench;
  FuzzOptions fuzz;
  uint64_t seed_value = 0;

  auto* demo_cmd = app.add_subcommand(
      "demo", "Run the two-UE registration, session, and key-exchange workflow");
  demo_cmd->add_option("--level", demo.level, "ML-KEM security level")
      ->check(CLI::IsMember({512, 768, 1024}))
      ->default_val(768);
  std::string demo_mode = "hybrid";
  demo_cmd->add_option("--mode", demo_mode, "Key exchange mode")
      ->check(CLI::IsMember({"conventional", "hybrid"}))
      ->default_val("hybrid");
  demo_cmd->add_flag("--dn", demo.dn,
                     "Use the dual-UPF topology with a data network hop");
  auto* demo_seed = demo_cmd->add_option(
      "--seed", seed_value, "Deterministic run from this 64-bit seed");
  demo_cmd
      ->add_option("--topology", demo.topology_path,
                   "Topology JSON file (PQ5G_TOPOLOGY is the fallback)")
      ->envname("PQ5G_TOPOLOGY");
  demo_cmd->add_option("--output", demo.output_path,
                       "DemoResult JSON path (empty prints to stdout)")
      ->default_val("demo_result.json");
  demo_cmd->add_flag("--swap", demo.swap,
                     "Swap roles: the second UE initiates");
  demo_cmd->add_option("--message", demo.message, "Application payload")
      ->default_val("hello over pq5g");
  std::string transport = "inproc";
  demo_cmd->add_option("--transport", transport, "inproc or udp")
      ->check(CLI::IsMember({"inproc", "udp"}))
      ->default_val("inproc");
  demo_cmd->add_option("--taps-dir", demo.taps_dir,
                       "Write per-link frame dumps into this directory");

  auto* kat_cmd = app.add_subcommand(
      "kat", "Replay ML-KEM known-answer vectors byte-exactly");
  kat_cmd->add_option("files", kat.files, "KAT .rsp files")->required();

  auto* bench_cmd =
      app.add_subcommand("bench", "Handshake latency per (mode, level)");
  bench_cmd->add_option("--iters", bench.iters, "Rounds per row")
      ->check(CLI::PositiveNumber)
      ->default_val(100);
  bench_cmd
      ->add_option("--clients", bench.clients,
                   "Concurrent client actors per round")
      ->check(CLI::PositiveNumber)
      ->default_val(1);
  auto* bench_seed = bench_cmd->add_option("--seed", seed_value,
                                           "Deterministic randomness seed");
  bench_cmd->add_option("--output", bench.output_path,
                        "BenchReport JSON path");
  int bench_level = 0;
  auto* bench_level_opt =
      bench_cmd->add_option("--level", bench_level, "Restrict to one level")
          ->check(CLI::IsMember({512, 768, 1024}));
  std::string bench_mode;
  auto* bench_mode_opt =
      bench_cmd->add_option("--mode", bench_mode, "Restrict to one mode")
          ->check(CLI::IsMember({"conventional", "hybrid"}));

  auto* fuzz_cmd = app.add_subcommand(
      "fuzz", "Randomized robustness sweep over parsers and endpoints");
  fuzz_cmd->add_option("--iters", fuzz.iters, "Fuzz iterations")
      ->check(CLI::PositiveNumber)
      ->default_val(100);
  auto* fuzz_seed =
      fuzz_cmd->add_option("--seed", seed_value, "Deterministic fuzz seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (demo_cmd->parsed()) {
    demo.hybrid = demo_mode == "hybrid";
    demo.udp = transport == "udp";
    if (demo_seed->count() > 0) demo.seed = seed_value;
    return cmd_demo(demo, std::cout, std::cerr);
  }
  if (kat_cmd->parsed()) return cmd_kat(kat, std::cout, std::cerr);
  if (bench_cmd->parsed()) {
    if (bench_seed->count() > 0) bench.seed = seed_value;
    if (bench_level_opt->count() > 0) bench.level = bench_level;
    if (bench_mode_opt->count() > 0) bench.hybrid = bench_mode == "hybrid";
    return cmd_bench(bench, std::cout, std::cerr);
  }
  if (fuzz_cmd->parsed()) {
    if (fuzz_seed->count() > 0) fuzz.seed = seed_value;
    return cmd_fuzz(fuzz, std::cout, std::cerr);
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
