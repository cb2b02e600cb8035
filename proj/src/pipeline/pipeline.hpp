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
#include <string>
#include <vector>

#include "debias/debias.hpp"
#include "debias/hubness.hpp"
#include "embedding/embeddings.hpp"
#include "mnmt/checkpoint.hpp"
#include "mnmt/features.hpp"
#include "train/metrics.hpp"
#include "train/trainer.hpp"

// File-level workflows behind the C API and the command-line tool.
namespace mmt::pipeline {

/// Debiases a pretrained table and returns it with the input word order.
PretrainedEmbeddings debias_pretrained(const PretrainedEmbeddings& embeddings, const DebiasMethod& method);

HubnessReport hubness_of_pretrained(const PretrainedEmbeddings& embeddings, std::size_t k, Metric metric);

/// Vocabulary from a corpus file plus its unknown-word-filled table.
EmbeddingTable build_init_table(const std::string& corpus_path, const PretrainedEmbeddings& embeddings,
                                std::uint64_t min_freq, std::optional<std::size_t> max_size);

struct TrainFiles {
  std::string source;
  std::string target;
  std::string features;         // required unless the model is text-only
  std::string source_embedding; // optional pretrained initialization
  std::string target_embedding; // optional
  EmbeddingFormat embedding_format = EmbeddingFormat::header;
};

struct TrainSetup {
  ModelConfig model;  // kind and layer sizes; vocab and feature sizes are filled from the data
  TrainConfig train;
  std::uint64_t min_freq = 1;
  std::optional<std::size_t> max_vocab;
};

struct TrainOutcome {
  Checkpoint checkpoint;
  std::vector<EpochLog> log;
  std::vector<std::string> warnings;
};

TrainOutcome train_from_files(const TrainFiles& files, const TrainSetup& setup,
                              const EpochCallback& on_epoch = nullptr);

/// Pairs sentences with feature items for the model kind. Throws ConfigError
/// when counts or feature kinds do not line up.
std::vector<Example> make_examples(const ModelConfig& config, const Vocabulary& source_vocab,
                                   const Vocabulary& target_vocab, const std::vector<Sentence>& source,
                                   const std::vector<Sentence>& target, const FeatureSet* features);

/// One output line per input line; empty inputs give empty outputs.
std::vector<std::string> translate(const Checkpoint& checkpoint, const std::vector<Sentence>& source,
                                   const FeatureSet* features, std::size_t max_len);

void translate_file(const Checkpoint& checkpoint, const std::string& source_path, const std::string& features_path,
                    std::size_t max_len, const std::string& output_path);

struct Evaluation {
  double bleu = 0.0;
  FScoreReport fscore;
  /// {"bleu": ..., "fscore": {...}}
  std::string to_json() const;
};

Evaluation evaluate(const std::vector<Sentence>& outputs, const std::vector<Sentence>& references,
                    const std::vector<Sentence>* train_corpus, const std::vector<std::uint64_t>& bucket_edges);

}  // namespace mmt::pipeline
