// Copyright 2026 The mmtemb Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "debias/hubness.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace mmt;

TEST_CASE("square corners are perfectly symmetric") {
  const auto t = testing::table_from_rows(Matrix(4, 2, {0, 0, 1, 0, 0, 1, 1, 1}));
  const auto r = hubness_report(t, 2, Metric::euclidean);
  for (int id = 4; id < 8; ++id) CHECK(r.n_k[id] == 2);
  CHECK(r.skewness == 0.0);
  CHECK(r.skewness_defined);
}

TEST_CASE("sum of k-occurrences is k times the vocabulary") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t words = 20 + 13 * seed;
    const std::size_t k = 1 + seed * 2;
    const auto t = testing::random_table(words, 6, seed);
    for (Metric m : {Metric::cosine, Metric::euclidean}) {
      const auto r = hubness_report(t, k, m);
      CHECK(std::accumulate(r.n_k.begin(), r.n_k.end(), std::size_t{0}) == k * words);
    }
  }
}

TEST_CASE("counts match the quadratic oracle") {
  const auto t = testing::random_table(150, 8, 12);
  for (Metric m : {Metric::cosine, Metric::euclidean}) {
    const auto r = hubness_report(t, 5, m);
    const auto ref = oracle::k_occurrence(oracle::to_rows(t.matrix), 4, 5, m == Metric::euclidean);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(r.n_k[i] == ref[i]);
  }
}

TEST_CASE("a planted hub at the centroid ranks first") {
  Matrix rows = testing::random_matrix(51, 10, 31, 0.0, 1.0);
  for (std::size_t c = 0; c < 10; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < 50; ++r) mean += rows(r, c) / 50.0;
    rows(50, c) = mean;
  }
  const auto t = testing::table_from_rows(rows);
  const auto r = hubness_report(t, 5, Metric::cosine);
  const int hub = 54;
  REQUIRE(!r.top_hubs.empty());
  CHECK(r.top_hubs.front().id == hub);
  for (int id = 4; id < 54; ++id) CHECK(r.n_k[id] < r.n_k[hub]);
  CHECK(r.skewness > 0.0);
}

TEST_CASE("skewness by hand") {
  bool defined = false;
  // Mean 1, deviations -1,-1,2: m2 = 2, m3 = 2, skew = 2 / 2^1.5.
  CHECK(std::abs(population_skewness({0, 0, 3}, &defined) - 2.0 / std::pow(2.0, 1.5)) < 1e-15);
  CHECK(defined);
  CHECK(population_skewness({1, 2}, &defined) == 0.0);
  CHECK_FALSE(defined);
}

TEST_CASE("JSON report") {
  const auto t = testing::random_table(30, 4, 2);
  const auto r = hubness_report(t, 3, Metric::cosine);
  const auto j = nlohmann::json::parse(r.to_json(5));
  CHECK(j["k"] == 3);
  CHECK(j["metric"] == "cosine");
  CHECK(j["top_hubs"].size() == 5);
  CHECK(j["top_hubs"][0]["n_k"] == r.top_hubs[0].n_k);
  CHECK(j["top_hubs"][0]["word"] == r.top_hubs[0].word);
  CHECK(j["skewness"].get<double>() == r.skewness);
  for (std::size_t i = 1; i < r.top_hubs.size(); ++i) CHECK(r.top_hubs[i - 1].n_k >= r.top_hubs[i].n_k);
}
