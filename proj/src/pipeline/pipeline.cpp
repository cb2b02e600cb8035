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

#include "pipeline/pipeline.hpp"

#include <json.hpp>

#include "numerics/errors.hpp"
#include "pipeline/fileio.hpp"

namespace mmt::pipeline {

PretrainedEmbeddings debias_pretrained(const PretrainedEmbeddings& embeddings, const DebiasMethod& method) {
  const EmbeddingTable table = table_from_pretrained(embeddings);
  return pretrained_from_table(apply_debias(table, method), embeddings.words());
}

HubnessReport hubness_of_pretrained(const PretrainedEmbeddings& embeddings, std::size_t k, Metric metric) {
  return hubness_report(table_from_pretrained(embeddings), k, metric);
}

EmbeddingTable build_init_table(const std::string& corpus_path, const PretrainedEmbeddings& embeddings,
                                std::uint64_t min_freq, std::optional<std::size_t> max_size) {
  const auto corpus = read_corpus(corpus_path);
  return init_embedding_table(embeddings, Vocabulary::build(corpus, min_freq, max_size));
}

std::vector<Example> make_examples(const ModelConfig& config, const Vocabulary& source_vocab,
                                   const Vocabulary& target_vocab, const std::vector<Sentence>& source,
                                   const std::vector<Sentence>& target, const FeatureSet* features) {
  if (source.size() != target.size()) {
    throw ConfigError(std::to_string(source.size()) + " source sentences but " + std::to_string(target.size()) +
                      " target sentences");
  }
  if (config.uses_spatial() || config.uses_global()) {
    if (!features) throw ConfigError(to_string(config.kind) + " model needs a feature file");
    if (features->items() != source.size()) {
      throw ConfigError("feature file has " + std::to_string(features->items()) + " items for " +
                        std::to_string(source.size()) + " sentences");
    }
  }
  std::vector<Example> out;
  out.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i].empty()) throw ConfigError("sentence pair " + std::to_string(i + 1) + ": empty source sentence");
    Example ex;
    ex.source = source_vocab.encode(source[i]);
    ex.target = target_vocab.encode(target[i]);
    if (config.uses_spatial()) ex.visual.spatial = features->item(i);
    if (config.uses_global()) ex.visual.global = features->global(i);
    out.push_back(std::move(ex));
  }
  return out;
}

namespace {

void check_feature_kind(const ModelConfig& config, const FeatureSet& features) {
  if (config.uses_spatial() && features.is_global()) {
    throw ConfigError("doubly-attentive model needs spatial features (rows_per_item > 1), got global vectors");
  }
  if (config.uses_global() && !features.is_global()) {
    throw ConfigError(to_string(config.kind) + " model needs global features (rows_per_item == 1), got spatial grids");
  }
}

void seed_embeddings(ModelParams& params, std::size_t tensor, const std::string& path, EmbeddingFormat format,
                     const Vocabulary& vocab, std::vector<std::string>& warnings) {
  const auto pretrained = parse_embedding_text(path, format, &warnings);
  const auto table = init_embedding_table(pretrained, vocab, params.config.emb);
  params.tensors[tensor].value = table.matrix;
  warnings.push_back(path + ": " + std::to_string(table.oov_ids.size()) +
                     " vocabulary rows initialized with the unknown-word mean");
}

}  // namespace

TrainOutcome train_from_files(const TrainFiles& files, const TrainSetup& setup, const EpochCallback& on_epoch) {
  const auto source = read_corpus(files.source);
  const auto target = read_corpus(files.target);

  ModelConfig config = setup.model;
  std::optional<FeatureSet> features;
  if (config.uses_spatial() || config.uses_global()) {
    if (files.features.empty()) throw ConfigError(to_string(config.kind) + " model needs --feats");
    features = FeatureSet::load(files.features);
    check_feature_kind(config, *features);
    if (config.uses_spatial()) config.spatial_dim = features->dim();
    if (config.uses_global()) config.global_dim = features->dim();
  }

  TrainOutcome outcome;
  Vocabulary source_vocab = Vocabulary::build(source, setup.min_freq, setup.max_vocab);
  Vocabulary target_vocab = Vocabulary::build(target, setup.min_freq, setup.max_vocab);
  config.src_vocab = source_vocab.size();
  config.tgt_vocab = target_vocab.size();
  config.lambda = setup.train.lambda;
  config.margin = setup.train.margin;
  config.rho = setup.train.rho;

  ModelParams params = make_model(config, setup.train.seed);
  if (!files.source_embedding.empty()) {
    seed_embeddings(params, params.ids.enc_emb, files.source_embedding, files.embedding_format, source_vocab,
                    outcome.warnings);
  }
  if (!files.target_embedding.empty()) {
    seed_embeddings(params, params.ids.dec_emb, files.target_embedding, files.embedding_format, target_vocab,
                    outcome.warnings);
  }

  const auto examples = make_examples(config, source_vocab, target_vocab, source, target,
                                      features ? &*features : nullptr);
  TrainResult result = train_model(std::move(params), examples, setup.train, on_epoch);
  if (result.latent_without_negatives) {
    outcome.warnings.push_back("some batches held a single item; their latent loss was 0 (no negatives)");
  }
  if (result.clamped_probabilities > 0) {
    outcome.warnings.push_back(std::to_string(result.clamped_probabilities) +
                               " reference probabilities were clamped at 1e-30");
  }
  outcome.checkpoint = Checkpoint{std::move(result.params), std::move(source_vocab), std::move(target_vocab)};
  outcome.log = std::move(result.log);
  return outcome;
}

std::vector<std::string> translate(const Checkpoint& checkpoint, const std::vector<Sentence>& source,
                                   const FeatureSet* features, std::size_t max_len) {
  const auto& config = checkpoint.params.config;
  if (config.uses_spatial() || config.uses_global()) {
    if (!features) throw ConfigError(to_string(config.kind) + " model needs a feature file");
    check_feature_kind(config, *features);
    if (features->items() != source.size()) {
      throw ConfigError("feature file has " + std::to_string(features->items()) + " items for " +
                        std::to_string(source.size()) + " sentences");
    }
  }
  std::vector<std::string> lines;
  lines.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i].empty()) {
      lines.emplace_back();
      continue;
    }
    VisualInput visual;
    if (config.uses_spatial()) visual.spatial = features->item(i);
    if (config.uses_global()) visual.global = features->global(i);
    const auto ids = greedy_decode(checkpoint.params, checkpoint.source_vocab.encode(source[i]), visual, max_len);
    std::string line;
    for (const auto& tok : checkpoint.target_vocab.decode(ids)) {
      if (!line.empty()) line += ' ';
      line += tok;
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

void translate_file(const Checkpoint& checkpoint, const std::string& source_path, const std::string& features_path,
                    std::size_t max_len, const std::string& output_path) {
  const auto source = read_corpus(source_path);
  std::optional<FeatureSet> features;
  if (!features_path.empty()) features = FeatureSet::load(features_path);
  std::string out;
  for (const auto& line : translate(checkpoint, source, features ? &*features : nullptr, max_len)) {
    out += line;
    out += '\n';
  }
  write_file_atomic(output_path, out);
}

std::string Evaluation::to_json() const {
  nlohmann::ordered_json j;
  j["bleu"] = bleu;
  j["fscore"] = nlohmann::ordered_json::parse(fscore.to_json());
  return j.dump(2) + "\n";
}

Evaluation evaluate(const std::vector<Sentence>& outputs, const std::vector<Sentence>& references,
                    const std::vector<Sentence>* train_corpus, const std::vector<std::uint64_t>& bucket_edges) {
  Evaluation e;
  e.bleu = corpus_bleu(outputs, references);
  const auto freq = train_corpus ? count_tokens(*train_corpus) : std::map<std::string, std::uint64_t>{};
  e.fscore = word_fscore_breakdown(outputs, references, freq, bucket_edges);
  return e;
}

}  // namespace mmt::pipeline
