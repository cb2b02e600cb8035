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

#include "support/fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "numerics/random.hpp"

namespace mmt::testing {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("mmt_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = uniform(rng, lo, hi);
  return m;
}

Vector random_vector(std::size_t n, std::uint64_t seed, double lo, double hi) {
  return random_matrix(n, 1, seed, lo, hi).to_vector();
}

EmbeddingTable table_from_rows(const Matrix& rows) {
  EmbeddingTable t;
  for (std::size_t i = 0; i < rows.rows(); ++i) t.vocab.add("w" + std::to_string(i), 1);
  t.matrix = Matrix(t.vocab.size(), rows.cols());
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t c = 0; c < rows.cols(); ++c) t.matrix(i + 4, c) = rows(i, c);
  return t;
}

EmbeddingTable random_table(std::size_t words, std::size_t dim, std::uint64_t seed) {
  return table_from_rows(random_matrix(words, dim, seed));
}

ModelConfig tiny_config(ModelKind kind) {
  ModelConfig c;
  c.kind = kind;
  c.src_vocab = 12;
  c.tgt_vocab = 12;
  c.emb = 8;
  c.hidden = 6;
  c.attention = 5;
  c.spatial_dim = 5;
  c.global_dim = 7;
  c.shared_dim = 4;
  return c;
}

std::vector<Example> random_examples(const ModelConfig& config, std::size_t count, std::uint64_t seed,
                                     std::size_t min_len, std::size_t max_len, std::size_t locations) {
  std::mt19937_64 rng(seed);
  auto token = [&](std::size_t vocab) { return 4 + static_cast<int>(rng() % (vocab - 4)); };
  std::vector<Example> out;
  for (std::size_t i = 0; i < count; ++i) {
    Example ex;
    const std::size_t ns = min_len + rng() % (max_len - min_len + 1);
    const std::size_t nt = min_len + rng() % (max_len - min_len + 1);
    for (std::size_t j = 0; j < ns; ++j) ex.source.push_back(token(config.src_vocab));
    for (std::size_t j = 0; j < nt; ++j) ex.target.push_back(token(config.tgt_vocab));
    if (config.uses_spatial()) {
      ex.visual.spatial = Matrix(locations, config.spatial_dim);
      for (double& x : ex.visual.spatial.data()) x = uniform(rng, -1.0, 1.0);
    }
    if (config.uses_global()) {
      ex.visual.global.resize(config.global_dim);
      for (double& x : ex.visual.global) x = uniform(rng, -1.0, 1.0);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

CopyTask make_copy_task(std::size_t pairs, std::size_t vocab, std::size_t locations, std::size_t spatial_dim,
                        std::size_t global_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CopyTask task;
  for (std::size_t i = 0; i < pairs; ++i) {
    Sentence s;
    const std::size_t n = 3 + rng() % 4;
    for (std::size_t j = 0; j < n; ++j) s.push_back("t" + std::to_string(rng() % vocab));
    task.sentences.push_back(std::move(s));
    Matrix spatial(locations, spatial_dim);
    for (double& x : spatial.data()) x = uniform(rng, -1.0, 1.0);
    task.spatial.push_back(std::move(spatial));
    Vector global(global_dim);
    for (double& x : global) x = uniform(rng, -1.0, 1.0);
    task.global.push_back(std::move(global));
  }
  return task;
}

}  // namespace mmt::testing
