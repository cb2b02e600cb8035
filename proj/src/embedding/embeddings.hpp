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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "embedding/vocabulary.hpp"
#include "numerics/matrix.hpp"

namespace mmt {

enum class EmbeddingFormat {
  header,      // first line "count dim" (word2vec / FastText text)
  headerless,  // GloVe text
};

/// Word vectors as read from a pretrained text file, in file order.
class PretrainedEmbeddings {
 public:
  explicit PretrainedEmbeddings(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  std::span<const double> vector(std::size_t index) const { return {data_.data() + index * dim_, dim_}; }
  std::optional<std::size_t> find(const std::string& word) const;
  bool contains(const std::string& word) const { return index_.count(word) != 0; }

  /// Returns false (and stores nothing) if `word` is already present.
  /// Throws DimensionError if values.size() != dim().
  bool add(const std::string& word, std::span<const double> values);

  /// Copy of all vectors, one row per word.
  Matrix matrix() const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::size_t dim_;
};

/// Vocabulary-aligned embedding matrix, ready to seed a model.
struct EmbeddingTable {
  Vocabulary vocab;
  Matrix matrix;                 // |vocab| x dim
  std::vector<int> oov_ids;      // rows filled with the unknown-word mean

  std::size_t dim() const { return matrix.cols(); }
};

PretrainedEmbeddings parse_embedding_text(const std::string& path, EmbeddingFormat format,
                                          std::vector<std::string>* warnings = nullptr);
PretrainedEmbeddings parse_embedding_string(const std::string& text, EmbeddingFormat format,
                                            const std::string& source_name = "<string>",
                                            std::vector<std::string>* warnings = nullptr);

std::string format_embedding_text(const PretrainedEmbeddings& emb, EmbeddingFormat format);
void write_embedding_text(const PretrainedEmbeddings& emb, const std::string& path, EmbeddingFormat format);
/// Writes every vocabulary row, specials included, in id order.
void write_embedding_text(const EmbeddingTable& table, const std::string& path, EmbeddingFormat format);

/// Unknown-word initialization. Vocabulary words found in `pretrained` copy
/// their vector. UNK and every other vocabulary entry missing from
/// `pretrained` get the mean of the pretrained vectors whose words are NOT in
/// the vocabulary. PAD is zero. Throws ArgumentError when `expected_dim` is
/// given and differs, and NumericalError when no pretrained-only word exists
/// but a row needs the mean.
EmbeddingTable init_embedding_table(const PretrainedEmbeddings& pretrained, const Vocabulary& vocab,
                                    std::optional<std::size_t> expected_dim = std::nullopt);

/// Specials followed by the pretrained words in file order. A pretrained word
/// spelled like a special token fills that special's row (PAD stays zero);
/// every other special row is zero.
EmbeddingTable table_from_pretrained(const PretrainedEmbeddings& pretrained);
/// Looks up each of `words` in the table, in the given order.
PretrainedEmbeddings pretrained_from_table(const EmbeddingTable& table, std::span<const std::string> words);

}  // namespace mmt
