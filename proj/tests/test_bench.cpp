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

#include "pq5g/ue/bench.hpp"

using namespace pq5g;
using namespace pq5g::ue;

TEST_CASE("the bench covers every mode with clean statistics", "[bench]") {
  BenchReport report = run_bench(2, 2, 424242, all_modes());

  CHECK(report.iters == 2);
  CHECK(report.clients == 2);
  REQUIRE(report.seed.has_value());
  CHECK(*report.seed == 424242);
  REQUIRE(report.rows.size() == 6);
  CHECK(report.total_failures() == 0);

  auto modes = all_modes();
  for (size_t i = 0; i < report.rows.size(); i++) {
    const BenchRow& row = report.rows[i];
    INFO("row " << row.mode.name());
    CHECK(row.mode.name() == modes[i].name());
    CHECK(row.count == 4);  // iters * clients
    CHECK(row.failures == 0);
    CHECK(row.min_us > 0);
    CHECK(row.min_us <= row.median_us);
    CHECK(row.median_us <= row.p95_us);
    CHECK(row.p95_us <= row.max_us);
    CHECK(row.mean_us >= row.min_us);
    CHECK(row.mean_us <= row.max_us);
  }
}

TEST_CASE("a single mode produces a single row", "[bench]") {
  BenchReport report = run_bench(1, 1, std::nullopt, {kem::KemMode{768, true}});
  CHECK_FALSE(report.seed.has_value());
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].mode.name() == "hybrid-768-x25519");
  CHECK(report.rows[0].count == 1);
  CHECK(report.rows[0].failures == 0);
  // With one sample every statistic collapses onto it.
  CHECK(report.rows[0].min_us == report.rows[0].max_us);
  CHECK(report.rows[0].median_us == report.rows[0].min_us);
}

TEST_CASE("non-positive bench arguments are refused", "[bench]") {
  CHECK_THROWS_AS(run_bench(0, 1, std::nullopt, all_modes()),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_bench(1, 0, std::nullopt, all_modes()),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_bench(-3, 2, std::nullopt, all_modes()),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_bench(2, -1, std::nullopt, all_modes()),
                  std::invalid_argument);
}

TEST_CASE("the bench report serializes to the published schema", "[bench]") {
  BenchReport report = run_bench(1, 2, 7, {kem::KemMode{512, false},
                                           kem::KemMode{512, true}});
  nlohmann::json j = report.to_json();

  CHECK(j.at("schema").get<std::string>() == "pq5g.bench_report/1");
  CHECK(j.at("iters").get<int>() == 1);
  CHECK(j.at("clients").get<int>() == 2);
  CHECK(j.at("seed").get<uint64_t>() == 7);
  REQUIRE(j.at("rows").is_array());
  REQUIRE(j.at("rows").size() == 2);

  const auto& row = j.at("rows").at(0);
  CHECK(row.at("mode").get<std::string>() == "conventional");
  CHECK(row.at("level").get<int>() == 512);
  CHECK(row.at("name").get<std::string>() == "mlkem-512");
  CHECK(row.at("count").get<size_t>() == 2);
  CHECK(row.at("failures").get<size_t>() == 0);
  for (const char* key : {"min_us", "mean_us", "median_us", "p95_us", "max_us"})
    CHECK(row.at(key).is_number());
  CHECK(j.at("rows").at(1).at("mode").get<std::string>() == "hybrid");

  // Without a seed the field is omitted entirely.
  BenchReport unseeded = run_bench(1, 1, std::nullopt, {kem::KemMode{768, false}});
  CHECK_FALSE(unseeded.to_json().contains("seed"));
}
