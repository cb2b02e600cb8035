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

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "embedding/embeddings.hpp"
#include "mnmt/model.hpp"
#include "mnmt/params.hpp"
#include "numerics/matrix.hpp"

namespace mmt::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void write_text(const std::string& path, const std::string& contents);
std::string read_text(const std::string& path);

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = -1.0, double hi = 1.0);
Vector random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0);

/// Words "w0".."w{n-1}" after the four specials, rows from `rows`; special
/// rows are zero.
EmbeddingTable table_from_rows(const Matrix& rows);
EmbeddingTable random_table(std::size_t words, std::size_t dim, std::uint64_t seed);

/// Vocabulary 12, emb 8, hidden 6, L = 4, spatial dim 5, global dim 7.
ModelConfig tiny_config(ModelKind kind);
constexpr std::size_t kTinyLocations = 4;

/// Random sentences over non-special ids with features for the kind.
std::vector<Example> random_examples(const ModelConfig& config, std::size_t count, std::uint64_t seed,
                                     std::size_t min_len = 2, std::size_t max_len = 4,
                                     std::size_t locations = kTinyLocations);

struct CopyTask {
  std::vector<Sentence> sentences;
  std::vector<Matrix> spatial;   // per sentence, locations x spatial_dim
  std::vector<Vector> global;    // per sentence
};

/// `pairs` random sentences of length 3..6 over `vocab` content words, with
/// random image features.
CopyTask make_copy_task(std::size_t pairs, std::size_t vocab, std::size_t locations, std::size_t spatial_dim,
                        std::size_t global_dim, std::uint64_t seed);

}  // namespace mmt::testing
