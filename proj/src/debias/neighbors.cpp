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

#include "debias/neighbors.hpp"

#include <algorithm>
#include <utility>

#include "numerics/dense.hpp"
#include "numerics/errors.hpp"
#include "numerics/parallel.hpp"

namespace mmt {

NeighborIndex::NeighborIndex(const EmbeddingTable& table, Metric metric) : table_(table), metric_(metric) {
  if (table.matrix.rows() != table.vocab.size()) {
    throw DimensionError("embedding table has " + std::to_string(table.matrix.rows()) + " rows for a vocabulary of " +
                         std::to_string(table.vocab.size()));
  }
  for (int id = Vocabulary::kNumSpecials; id < static_cast<int>(table.vocab.size()); ++id) candidates_.push_back(id);
  norms_.resize(table.matrix.rows());
  for (std::size_t r = 0; r < table.matrix.rows(); ++r) norms_[r] = norm(table.matrix.row(r));
}

// Higher is closer. Cosine against a zero vector counts as 0.
double NeighborIndex::similarity(std::size_t a, std::size_t b) const {
  const auto x = table_.matrix.row(a);
  const auto y = table_.matrix.row(b);
  if (metric_ == Metric::cosine) {
    if (norms_[a] == 0.0 || norms_[b] == 0.0) return 0.0;
    return dot(x, y) / (norms_[a] * norms_[b]);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] - y[i]) * (x[i] - y[i]);
  return -d;
}

std::vector<int> NeighborIndex::query(int word_id, std::size_t k) const {
  if (word_id < 0 || static_cast<std::size_t>(word_id) >= table_.vocab.size()) {
    throw ArgumentError("kNN: word id " + std::to_string(word_id) + " out of range");
  }
  if (k == 0 || k >= candidates_.size()) {
    throw ArgumentError("kNN: k=" + std::to_string(k) + " must be in [1, " + std::to_string(candidates_.size()) +
                        ") for " + std::to_string(candidates_.size()) + " words");
  }
  std::vector<std::pair<double, int>> scored;
  scored.reserve(candidates_.size());
  for (int id : candidates_) {
    if (id == word_id) continue;
    scored.emplace_back(similarity(static_cast<std::size_t>(word_id), static_cast<std::size_t>(id)), id);
  }
  auto closer = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), closer);
  std::vector<int> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<std::vector<int>> NeighborIndex::query_all(std::size_t k) const {
  std::vector<std::vector<int>> out(table_.vocab.size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = query(static_cast<int>(i), k); });
  return out;
}

std::vector<int> k_nearest_neighbors(const EmbeddingTable& table, int word_id, std::size_t k, Metric metric) {
  return NeighborIndex(table, metric).query(word_id, k);
}

}  // namespace mmt
