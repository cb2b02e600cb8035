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

#include "embedding/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "numerics/errors.hpp"
#include "pipeline/fileio.hpp"

namespace mmt {

std::optional<std::size_t> PretrainedEmbeddings::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool PretrainedEmbeddings::add(const std::string& word, std::span<const double> values) {
  if (values.size() != dim_) {
    throw DimensionError("embedding for '" + word + "' has " + std::to_string(values.size()) + " values, expected " +
                         std::to_string(dim_));
  }
  if (!index_.emplace(word, words_.size()).second) return false;
  words_.push_back(word);
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

Matrix PretrainedEmbeddings::matrix() const { return Matrix(words_.size(), dim_, data_); }

namespace {

double parse_double(std::string_view field, const std::string& where) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError(where + ": bad number '" + std::string(field) + "'");
  return v;
}

std::string location(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

}  // namespace

PretrainedEmbeddings parse_embedding_string(const std::string& text, EmbeddingFormat format,
                                            const std::string& source_name, std::vector<std::string>* warnings) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared_count;
  std::optional<std::size_t> dim;

  if (format == EmbeddingFormat::header) {
    while (std::getline(in, line)) {
      ++line_no;
      const auto fields = tokenize(line);
      if (fields.empty()) continue;
      if (fields.size() != 2) throw ParseError(location(source_name, line_no) + ": expected header 'count dim'");
      try {
        declared_count = std::stoull(fields[0]);
        dim = std::stoull(fields[1]);
      } catch (const std::exception&) {
        throw ParseError(location(source_name, line_no) + ": expected header 'count dim'");
      }
      if (*dim == 0) throw ParseError(location(source_name, line_no) + ": dimension must be positive");
      break;
    }
    if (!dim) throw ParseError(source_name + ": missing header line");
  }

  PretrainedEmbeddings emb(dim.value_or(0));
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = tokenize(line);
    if (fields.empty()) continue;
    const std::string where = location(source_name, line_no);
    if (fields.size() < 2) throw ParseError(where + ": word without values");
    if (!dim) {
      dim = fields.size() - 1;
      emb = PretrainedEmbeddings(*dim);
    }
    if (fields.size() - 1 != *dim) {
      throw ParseError(where + ": expected " + std::to_string(*dim) + " values, got " + std::to_string(fields.size() - 1));
    }
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_double(fields[i], where));
    if (!emb.add(fields[0], values) && warnings) {
      warnings->push_back(where + ": duplicate word '" + fields[0] + "' ignored (first occurrence kept)");
    }
  }
  if (declared_count && *declared_count != emb.size() && warnings) {
    warnings->push_back(source_name + ": header declares " + std::to_string(*declared_count) + " words, read " +
                        std::to_string(emb.size()));
  }
  return emb;
}

PretrainedEmbeddings parse_embedding_text(const std::string& path, EmbeddingFormat format,
                                          std::vector<std::string>* warnings) {
  return parse_embedding_string(read_file(path), format, path, warnings);
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, ptr);
}

void append_row(std::string& out, const std::string& word, std::span<const double> values) {
  out += word;
  for (double v : values) {
    out += ' ';
    append_number(out, v);
  }
  out += '\n';
}

}  // namespace

std::string format_embedding_text(const PretrainedEmbeddings& emb, EmbeddingFormat format) {
  std::string out;
  if (format == EmbeddingFormat::header) out += std::to_string(emb.size()) + " " + std::to_string(emb.dim()) + "\n";
  for (std::size_t i = 0; i < emb.size(); ++i) append_row(out, emb.words()[i], emb.vector(i));
  return out;
}

void write_embedding_text(const PretrainedEmbeddings& emb, const std::string& path, EmbeddingFormat format) {
  write_file_atomic(path, format_embedding_text(emb, format));
}

void write_embedding_text(const EmbeddingTable& table, const std::string& path, EmbeddingFormat format) {
  std::string out;
  if (format == EmbeddingFormat::header) {
    out += std::to_string(table.vocab.size()) + " " + std::to_string(table.dim()) + "\n";
  }
  for (std::size_t i = 0; i < table.vocab.size(); ++i) {
    append_row(out, table.vocab.token(static_cast<int>(i)), table.matrix.row(i));
  }
  write_file_atomic(path, out);
}

EmbeddingTable init_embedding_table(const PretrainedEmbeddings& pretrained, const Vocabulary& vocab,
                                    std::optional<std::size_t> expected_dim) {
  const std::size_t dim = pretrained.dim();
  if (expected_dim && *expected_dim != dim) {
    throw ArgumentError("pretrained embeddings have dimension " + std::to_string(dim) + ", model expects " +
                        std::to_string(*expected_dim));
  }

  // Mean over words that the pretrained table has but the vocabulary lacks.
  std::vector<double> mean(dim, 0.0);
  std::size_t outside = 0;
  for (std::size_t i = 0; i < pretrained.size(); ++i) {
    if (vocab.find(pretrained.words()[i])) continue;
    const auto v = pretrained.vector(i);
    for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d];
    ++outside;
  }
  if (outside > 0)
    for (auto& m : mean) m /= static_cast<double>(outside);

  EmbeddingTable table{vocab, Matrix(vocab.size(), dim), {}};
  for (int id = 0; id < static_cast<int>(vocab.size()); ++id) {
    if (id == Vocabulary::kPad) continue;
    auto row = table.matrix.row(static_cast<std::size_t>(id));
    const auto hit = id == Vocabulary::kUnk ? std::nullopt : pretrained.find(vocab.token(id));
    if (hit) {
      const auto v = pretrained.vector(*hit);
      std::copy(v.begin(), v.end(), row.begin());
    } else {
      std::copy(mean.begin(), mean.end(), row.begin());
      table.oov_ids.push_back(id);
    }
  }
  if (outside == 0 && !table.oov_ids.empty()) {
    throw NumericalError("unknown-word mean is undefined: every pretrained word is in the vocabulary");
  }
  return table;
}

EmbeddingTable table_from_pretrained(const PretrainedEmbeddings& pretrained) {
  Vocabulary vocab;
  for (const auto& w : pretrained.words())
    if (!vocab.find(w)) vocab.add(w, 1);
  EmbeddingTable table{vocab, Matrix(vocab.size(), pretrained.dim()), {}};
  for (std::size_t i = 0; i < pretrained.size(); ++i) {
    const int id = *vocab.find(pretrained.words()[i]);
    if (id == Vocabulary::kPad) continue;
    const auto v = pretrained.vector(i);
    std::copy(v.begin(), v.end(), table.matrix.row(static_cast<std::size_t>(id)).begin());
  }
  return table;
}

PretrainedEmbeddings pretrained_from_table(const EmbeddingTable& table, std::span<const std::string> words) {
  PretrainedEmbeddings out(table.dim());
  for (const auto& w : words) {
    const auto id = table.vocab.find(w);
    if (!id) throw ArgumentError("word '" + w + "' is not in the table");
    out.add(w, table.matrix.row(static_cast<std::size_t>(*id)));
  }
  return out;
}

}  // namespace mmt
