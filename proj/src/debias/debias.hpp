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
#include <string>
#include <variant>

#include "debias/neighbors.hpp"
#include "embedding/embeddings.hpp"
#include "numerics/pca.hpp"

namespace mmt {

inline constexpr std::size_t kDefaultLocalSegment = 10;
inline constexpr std::size_t kDefaultRemovedComponents = 3;

struct NoDebias {};
struct LocalizedCentering {
  std::size_t k = kDefaultLocalSegment;
  Metric metric = Metric::cosine;
};
struct AllButTheTop {
  std::size_t components = kDefaultRemovedComponents;
};
using DebiasMethod = std::variant<NoDebias, LocalizedCentering, AllButTheTop>;

/// x - mean(kNN(x)) for every row. All neighbor centroids come from the input
/// table, never from partially updated rows. PAD stays zero; other specials
/// are shifted by their neighbors but never serve as neighbors.
EmbeddingTable localized_centering(const EmbeddingTable& table, std::size_t k, Metric metric = Metric::cosine);

struct AbttResult {
  EmbeddingTable table;
  Vector centroid;
  PcaBasis removed;  // u_1..u_D
};

/// Subtracts the vocabulary centroid, then the projections onto the top
/// `components` principal directions of the centered rows. Statistics use
/// non-special rows only; specials are transformed the same way except PAD,
/// which stays zero. The output is not re-centered.
AbttResult all_but_the_top_detailed(const EmbeddingTable& table, std::size_t components);
EmbeddingTable all_but_the_top(const EmbeddingTable& table, std::size_t components);

EmbeddingTable apply_debias(const EmbeddingTable& table, const DebiasMethod& method);

std::string describe(const DebiasMethod& method);

}  // namespace mmt
