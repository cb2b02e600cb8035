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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embedding/vocabulary.hpp"

namespace mmt {

/// Corpus BLEU in [0, 100]: clipped n-gram counts pooled over the corpus for
/// n = 1..max_n, geometric mean of the precisions, brevity penalty. No
/// smoothing: any zero precision gives 0.
double corpus_bleu(std::span<const Sentence> outputs, std::span<const Sentence> references, int max_n = 4);

struct WordScore {
  std::string word;
  std::uint64_t train_frequency = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct FrequencyBucket {
  std::uint64_t lower = 0;                // inclusive
  std::optional<std::uint64_t> upper;     // exclusive; none for the last bucket
  std::size_t words = 0;
  double mean_f1 = 0.0;                   // unweighted mean of member f1
};

struct FScoreReport {
  std::vector<WordScore> words;           // sorted by word
  std::vector<FrequencyBucket> buckets;

  /// {"words": [...], "buckets": {"lower": [...], "upper": [...], "count": [...], "f1": [...]}}
  std::string to_json() const;
};

/// Sentence-level co-occurrence scores for every word seen in outputs or
/// references: precision = |{i : w in out_i and w in ref_i}| / |{i : w in out_i}|,
/// recall uses |{i : w in ref_i}| as denominator, f1 their harmonic mean (0
/// when undefined). Words are bucketed by training-corpus frequency with
/// buckets [0, e_0), [e_0, e_1), ..., [e_last, inf); edges must be strictly
/// increasing and positive.
FScoreReport word_fscore_breakdown(std::span<const Sentence> outputs, std::span<const Sentence> references,
                                   const std::map<std::string, std::uint64_t>& train_frequency,
                                   std::span<const std::uint64_t> bucket_edges);

std::map<std::string, std::uint64_t> count_tokens(std::span<const Sentence> corpus);

}  // namespace mmt
