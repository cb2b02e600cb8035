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

#include "debias/hubness.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "numerics/parallel.hpp"

namespace mmt {

double population_skewness(const std::vector<double>& values, bool* defined) {
  if (defined) *defined = false;
  if (values.size() < 3) return 0.0;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 == 0.0) {
    // Every count equal: symmetric, the moment ratio is 0/0.
    if (defined) *defined = true;
    return 0.0;
  }
  if (defined) *defined = true;
  return m3 / std::pow(m2, 1.5);
}

HubnessReport hubness_report(const EmbeddingTable& table, std::size_t k, Metric metric) {
  const NeighborIndex index(table, metric);
  HubnessReport report;
  report.k = k;
  report.metric = metric;
  report.n_k.assign(table.vocab.size(), 0);

  const std::size_t first = Vocabulary::kNumSpecials;
  std::vector<std::vector<int>> lists(table.vocab.size() > first ? table.vocab.size() - first : 0);
  // Specials never appear as neighbors and are not queried.
  parallel_for(lists.size(), [&](std::size_t i) { lists[i] = index.query(static_cast<int>(i + first), k); });
  for (const auto& l : lists)
    for (int id : l) ++report.n_k[static_cast<std::size_t>(id)];

  std::vector<double> counts;
  for (std::size_t id = first; id < report.n_k.size(); ++id) counts.push_back(static_cast<double>(report.n_k[id]));
  report.skewness = population_skewness(counts, &report.skewness_defined);

  for (std::size_t id = first; id < report.n_k.size(); ++id) {
    report.top_hubs.push_back({static_cast<int>(id), table.vocab.token(static_cast<int>(id)), report.n_k[id]});
  }
  std::stable_sort(report.top_hubs.begin(), report.top_hubs.end(),
                   [](const HubEntry& a, const HubEntry& b) { return a.n_k > b.n_k; });
  return report;
}

std::string HubnessReport::to_json(std::size_t top) const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["metric"] = metric == Metric::cosine ? "cosine" : "euclidean";
  j["skewness"] = skewness;
  j["skewness_defined"] = skewness_defined;
  auto hubs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < std::min(top, top_hubs.size()); ++i) {
    hubs.push_back({{"word", top_hubs[i].word}, {"n_k", top_hubs[i].n_k}});
  }
  j["top_hubs"] = hubs;
  return j.dump(2) + "\n";
}

}  // namespace mmt
