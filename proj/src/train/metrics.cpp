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

#include "train/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "numerics/errors.hpp"

namespace mmt {

namespace {

std::map<std::vector<std::string>, std::size_t> ngram_counts(const Sentence& s, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (s.size() < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[std::vector<std::string>(s.begin() + i, s.begin() + i + n)];
  return counts;
}

void require_parallel(std::size_t outputs, std::size_t references, const char* what) {
  if (outputs != references) {
    throw ArgumentError(std::string(what) + ": " + std::to_string(outputs) + " outputs for " +
                        std::to_string(references) + " references");
  }
}

}  // namespace

double corpus_bleu(std::span<const Sentence> outputs, std::span<const Sentence> references, int max_n) {
  require_parallel(outputs.size(), references.size(), "corpus_bleu");
  if (outputs.empty()) throw ArgumentError("corpus_bleu: empty corpus");
  if (max_n < 1) throw ArgumentError("corpus_bleu: max_n must be positive");

  std::vector<std::size_t> matched(static_cast<std::size_t>(max_n), 0);
  std::vector<std::size_t> total(static_cast<std::size_t>(max_n), 0);
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    hyp_len += outputs[i].size();
    ref_len += references[i].size();
    for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
      const auto hyp = ngram_counts(outputs[i], n);
      const auto ref = ngram_counts(references[i], n);
      for (const auto& [gram, count] : hyp) {
        total[n - 1] += count;
        auto it = ref.find(gram);
        if (it != ref.end()) matched[n - 1] += std::min(count, it->second);
      }
    }
  }
  double log_precision = 0.0;
  for (std::size_t n = 0; n < matched.size(); ++n) {
    if (matched[n] == 0 || total[n] == 0) return 0.0;
    log_precision += std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
  }
  log_precision /= static_cast<double>(max_n);
  const double brevity =
      hyp_len >= ref_len ? 1.0 : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  return 100.0 * brevity * std::exp(log_precision);
}

FScoreReport word_fscore_breakdown(std::span<const Sentence> outputs, std::span<const Sentence> references,
                                   const std::map<std::string, std::uint64_t>& train_frequency,
                                   std::span<const std::uint64_t> bucket_edges) {
  require_parallel(outputs.size(), references.size(), "word_fscore_breakdown");
  for (std::size_t i = 0; i < bucket_edges.size(); ++i) {
    if (bucket_edges[i] == 0 || (i > 0 && bucket_edges[i] <= bucket_edges[i - 1])) {
      throw ArgumentError("word_fscore_breakdown: bucket edges must be positive and strictly increasing");
    }
  }

  std::map<std::string, std::size_t> in_output;
  std::map<std::string, std::size_t> in_reference;
  std::map<std::string, std::size_t> in_both;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const std::set<std::string> out(outputs[i].begin(), outputs[i].end());
    const std::set<std::string> ref(references[i].begin(), references[i].end());
    for (const auto& w : out) ++in_output[w];
    for (const auto& w : ref) {
      ++in_reference[w];
      if (out.count(w)) ++in_both[w];
    }
  }
  std::set<std::string> vocabulary;
  for (const auto& [w, c] : in_output) vocabulary.insert(w);
  for (const auto& [w, c] : in_reference) vocabulary.insert(w);

  auto lookup = [](const std::map<std::string, std::size_t>& m, const std::string& w) -> double {
    auto it = m.find(w);
    return it == m.end() ? 0.0 : static_cast<double>(it->second);
  };

  FScoreReport report;
  for (const auto& w : vocabulary) {
    WordScore s;
    s.word = w;
    if (auto it = train_frequency.find(w); it != train_frequency.end()) s.train_frequency = it->second;
    const double both = lookup(in_both, w);
    const double out = lookup(in_output, w);
    const double ref = lookup(in_reference, w);
    s.precision = out > 0 ? both / out : 0.0;
    s.recall = ref > 0 ? both / ref : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    report.words.push_back(s);
  }

  std::vector<std::uint64_t> lowers{0};
  lowers.insert(lowers.end(), bucket_edges.begin(), bucket_edges.end());
  std::vector<double> f1_sum(lowers.size(), 0.0);
  report.buckets.resize(lowers.size());
  for (std::size_t b = 0; b < lowers.size(); ++b) {
    report.buckets[b].lower = lowers[b];
    if (b + 1 < lowers.size()) report.buckets[b].upper = lowers[b + 1];
  }
  for (const auto& s : report.words) {
    const auto pos = std::upper_bound(lowers.begin(), lowers.end(), s.train_frequency) - lowers.begin() - 1;
    auto& bucket = report.buckets[static_cast<std::size_t>(pos)];
    ++bucket.words;
    f1_sum[static_cast<std::size_t>(pos)] += s.f1;
  }
  for (std::size_t b = 0; b < report.buckets.size(); ++b) {
    if (report.buckets[b].words > 0) report.buckets[b].mean_f1 = f1_sum[b] / static_cast<double>(report.buckets[b].words);
  }
  return report;
}

std::string FScoreReport::to_json() const {
  nlohmann::ordered_json j;
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : words) {
    ws.push_back({{"word", w.word},
                  {"train_frequency", w.train_frequency},
                  {"precision", w.precision},
                  {"recall", w.recall},
                  {"f1", w.f1}});
  }
  j["words"] = ws;
  nlohmann::ordered_json lower = nlohmann::ordered_json::array();
  nlohmann::ordered_json upper = nlohmann::ordered_json::array();
  nlohmann::ordered_json count = nlohmann::ordered_json::array();
  nlohmann::ordered_json f1 = nlohmann::ordered_json::array();
  for (const auto& b : buckets) {
    lower.push_back(b.lower);
    upper.push_back(b.upper ? nlohmann::ordered_json(*b.upper) : nlohmann::ordered_json(nullptr));
    count.push_back(b.words);
    f1.push_back(b.mean_f1);
  }
  j["buckets"] = {{"lower", lower}, {"upper", upper}, {"count", count}, {"f1", f1}};
  return j.dump(2) + "\n";
}

std::map<std::string, std::uint64_t> count_tokens(std::span<const Sentence> corpus) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& s : corpus)
    for (const auto& w : s) ++counts[w];
  return counts;
}

}  // namespace mmt
