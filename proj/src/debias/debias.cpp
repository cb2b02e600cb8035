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

#include "debias/debias.hpp"

#include <algorithm>

#include "numerics/errors.hpp"
#include "numerics/parallel.hpp"

namespace mmt {

EmbeddingTable localized_centering(const EmbeddingTable& table, std::size_t k, Metric metric) {
  const NeighborIndex index(table, metric);
  const auto neighbors = index.query_all(k);
  EmbeddingTable out = table;
  const std::size_t dim = table.dim();
  parallel_for(table.vocab.size(), [&](std::size_t id) {
    auto row = out.matrix.row(id);
    if (id == static_cast<std::size_t>(Vocabulary::kPad)) {
      std::fill(row.begin(), row.end(), 0.0);
      return;
    }
    std::vector<double> centroid(dim, 0.0);
    for (int n : neighbors[id]) {
      const auto v = table.matrix.row(static_cast<std::size_t>(n));
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += v[d];
    }
    const double inv = 1.0 / static_cast<double>(neighbors[id].size());
    for (std::size_t d = 0; d < dim; ++d) row[d] -= centroid[d] * inv;
  });
  return out;
}

AbttResult all_but_the_top_detailed(const EmbeddingTable& table, std::size_t components) {
  const std::size_t dim = table.dim();
  if (components > dim) {
    throw ArgumentError("all_but_the_top: cannot remove " + std::to_string(components) + " components from " +
                        std::to_string(dim) + "-dimensional embeddings");
  }
  const std::size_t first = Vocabulary::kNumSpecials;
  const std::size_t words = table.vocab.size() > first ? table.vocab.size() - first : 0;
  if (words == 0) throw ArgumentError("all_but_the_top: table has no words");

  Vector centroid(dim, 0.0);
  for (std::size_t r = first; r < table.vocab.size(); ++r) {
    const auto v = table.matrix.row(r);
    for (std::size_t d = 0; d < dim; ++d) centroid[d] += v[d];
  }
  for (auto& c : centroid) c /= static_cast<double>(words);

  Matrix centered(words, dim);
  for (std::size_t r = 0; r < words; ++r) {
    const auto v = table.matrix.row(r + first);
    auto c = centered.row(r);
    for (std::size_t d = 0; d < dim; ++d) c[d] = v[d] - centroid[d];
  }

  // The covariance is dim x dim, so all `dim` directions exist even when
  // there are fewer words than dimensions.
  PcaBasis basis;
  if (components > 0) {
    auto eig = jacobi_eigen(covariance(centered));
    for (std::size_t i = 0; i < components; ++i) {
      basis.components.push_back(std::move(eig.vectors[i]));
      basis.eigenvalues.push_back(std::max(eig.values[i], 0.0));
    }
  }

  EmbeddingTable out = table;
  for (std::size_t r = 0; r < table.vocab.size(); ++r) {
    auto row = out.matrix.row(r);
    if (r == static_cast<std::size_t>(Vocabulary::kPad)) {
      std::fill(row.begin(), row.end(), 0.0);
      continue;
    }
    for (std::size_t d = 0; d < dim; ++d) row[d] -= centroid[d];
    Vector shifted(row.begin(), row.end());
    for (const auto& u : basis.components) {
      double proj = 0.0;
      for (std::size_t d = 0; d < dim; ++d) proj += u[d] * shifted[d];
      for (std::size_t d = 0; d < dim; ++d) row[d] -= proj * u[d];
    }
  }
  return {std::move(out), std::move(centroid), std::move(basis)};
}

EmbeddingTable all_but_the_top(const EmbeddingTable& table, std::size_t components) {
  return all_but_the_top_detailed(table, components).table;
}

EmbeddingTable apply_debias(const EmbeddingTable& table, const DebiasMethod& method) {
  if (const auto* lc = std::get_if<LocalizedCentering>(&method)) return localized_centering(table, lc->k, lc->metric);
  if (const auto* abtt = std::get_if<AllButTheTop>(&method)) return all_but_the_top(table, abtt->components);
  return table;
}

std::string describe(const DebiasMethod& method) {
  if (const auto* lc = std::get_if<LocalizedCentering>(&method)) return "localized_centering(k=" + std::to_string(lc->k) + ")";
  if (const auto* abtt = std::get_if<AllButTheTop>(&method)) return "all_but_the_top(D=" + std::to_string(abtt->components) + ")";
  return "none";
}

}  // namespace mmt
