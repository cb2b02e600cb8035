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

#pragma once

#include <cstddef>
#include <vector>

#include "embedding/embeddings.hpp"

namespace mmt {

enum class Metric { cosine, euclidean };

/// Exact k-nearest-neighbor search over the non-special rows of a table.
/// Row norms are cached at construction; the table must outlive the index.
class NeighborIndex {
 public:
  NeighborIndex(const EmbeddingTable& table, Metric metric);

  /// The k most similar non-special words other than `word_id`, most similar
  /// first, ties broken by ascending id. Throws ArgumentError unless
  /// 1 <= k < number of non-special words.
  std::vector<int> query(int word_id, std::size_t k) const;

  /// query() for every id in [0, |vocab|), computed in parallel.
  std::vector<std::vector<int>> query_all(std::size_t k) const;

  std::size_t candidate_count() const { return candidates_.size(); }

 private:
  double similarity(std::size_t a, std::size_t b) const;

  const EmbeddingTable& table_;
  Metric metric_;
  std::vector<int> candidates_;
  std::vector<double> norms_;
};

std::vector<int> k_nearest_neighbors(const EmbeddingTable& table, int word_id, std::size_t k,
                                     Metric metric = Metric::cosine);

}  // namespace mmt
