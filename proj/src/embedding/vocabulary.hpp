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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mmt {

using Sentence = std::vector<std::string>;

/// Token <-> id mapping. Ids 0..3 are always PAD, UNK, BOS, EOS.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kNumSpecials = 4;

  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kBosToken = "<s>";
  static constexpr std::string_view kEosToken = "</s>";

  /// Specials only.
  Vocabulary();

  /// Counts tokens, drops those below min_freq, orders the rest by
  /// (frequency desc, first occurrence asc) and keeps at most max_size of them.
  static Vocabulary build(std::span<const Sentence> corpus, std::uint64_t min_freq = 1,
                          std::optional<std::size_t> max_size = std::nullopt);

  /// Appends a non-special token; throws ArgumentError on duplicates.
  int add(const std::string& token, std::uint64_t frequency);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(int id) const;
  std::uint64_t frequency(int id) const;
  std::optional<int> find(std::string_view token) const;
  int id_or_unk(std::string_view token) const;
  static bool is_special(int id) { return id >= 0 && id < kNumSpecials; }

  std::vector<int> encode(std::span<const std::string> tokens) const;
  /// Stops at EOS; skips PAD and BOS.
  Sentence decode(std::span<const int> ids) const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  /// FNV-1a over the newline-joined token list.
  std::uint64_t hash() const;

  /// "token count" per line, in id order, specials included.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.frequency_ == b.frequency_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> frequency_;
  std::unordered_map<std::string, int> index_;
};

/// Whitespace tokenization of one line.
Sentence tokenize(std::string_view line);

/// One sentence per line.
std::vector<Sentence> read_corpus(const std::string& path);

}  // namespace mmt
