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

#include "embedding/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "numerics/errors.hpp"
#include "pipeline/fileio.hpp"

namespace mmt {

Vocabulary::Vocabulary() {
  for (auto tok : {kPadToken, kUnkToken, kBosToken, kEosToken}) {
    index_.emplace(std::string(tok), static_cast<int>(tokens_.size()));
    tokens_.emplace_back(tok);
    frequency_.push_back(0);
  }
}

Vocabulary Vocabulary::build(std::span<const Sentence> corpus, std::uint64_t min_freq,
                             std::optional<std::size_t> max_size) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::string> seen;
  std::vector<std::uint64_t> counts;
  for (const auto& sentence : corpus) {
    for (const auto& tok : sentence) {
      auto [it, inserted] = slot.emplace(tok, seen.size());
      if (inserted) {
        seen.push_back(tok);
        counts.push_back(0);
      }
      ++counts[it->second];
    }
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (counts[i] >= min_freq) order.push_back(i);
  }
  // `order` is already in first-occurrence order, so a stable sort on
  // frequency alone yields the tie-break.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  if (max_size && order.size() > *max_size) order.resize(*max_size);

  Vocabulary vocab;
  for (std::size_t i : order) {
    if (vocab.find(seen[i])) continue;  // a corpus token spelled like a special
    vocab.add(seen[i], counts[i]);
  }
  return vocab;
}

int Vocabulary::add(const std::string& token, std::uint64_t frequency) {
  if (index_.count(token)) throw ArgumentError("vocabulary: duplicate token '" + token + "'");
  const int id = static_cast<int>(tokens_.size());
  index_.emplace(token, id);
  tokens_.push_back(token);
  frequency_.push_back(frequency);
  return id;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw ArgumentError("vocabulary: id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::frequency(int id) const {
  token(id);
  return frequency_[static_cast<std::size_t>(id)];
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::id_or_unk(std::string_view token) const { return find(token).value_or(kUnk); }

std::vector<int> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id_or_unk(t));
  return ids;
}

Sentence Vocabulary::decode(std::span<const int> ids) const {
  Sentence out;
  for (int id : ids) {
    if (id == kEos) break;
    if (id == kPad || id == kBos) continue;
    out.push_back(token(id));
  }
  return out;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& t : tokens_) {
    for (unsigned char c : t) mix(c);
    mix('\n');
  }
  return h;
}

void Vocabulary::save(const std::string& path) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) out << tokens_[i] << ' ' << frequency_[i] << '\n';
  write_file_atomic(path, out.str());
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary '" + path + "'");
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  std::size_t entry = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = tokenize(line);
    if (fields.empty()) continue;
    ++entry;
    if (fields.size() != 2) throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'token count'");
    std::uint64_t count = 0;
    try {
      count = std::stoull(fields[1]);
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad count '" + fields[1] + "'");
    }
    if (entry <= static_cast<std::size_t>(kNumSpecials)) {
      if (fields[0] != vocab.tokens_[entry - 1]) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": expected special token '" + vocab.tokens_[entry - 1] + "'");
      }
      continue;
    }
    vocab.add(fields[0], count);
  }
  return vocab;
}

Sentence tokenize(std::string_view line) {
  Sentence out;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<Sentence> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path + "'");
  std::vector<Sentence> corpus;
  std::string line;
  while (std::getline(in, line)) corpus.push_back(tokenize(line));
  return corpus;
}

}  // namespace mmt
