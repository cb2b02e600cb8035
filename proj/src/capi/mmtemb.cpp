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

#include "mmtemb/mmtemb.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "numerics/errors.hpp"
#include "pipeline/fileio.hpp"
#include "pipeline/pipeline.hpp"

struct mmt_embeddings {
  mmt::PretrainedEmbeddings value;
  std::vector<std::string> warnings;
};

struct mmt_model {
  mmt::Checkpoint checkpoint;
  std::vector<std::string> warnings;
};

namespace {

thread_local std::string g_last_error;

mmt_status fail(mmt_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating library exceptions into status codes.
template <typename F>
mmt_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return MMT_OK;
  } catch (const mmt::DimensionError& e) {
    return fail(MMT_ERR_DIMENSION, e.what());
  } catch (const mmt::ArgumentError& e) {
    return fail(MMT_ERR_ARGUMENT, e.what());
  } catch (const mmt::NumericalError& e) {
    return fail(MMT_ERR_NUMERICAL, e.what());
  } catch (const mmt::ParseError& e) {
    return fail(MMT_ERR_PARSE, e.what());
  } catch (const mmt::IoError& e) {
    return fail(MMT_ERR_IO, e.what());
  } catch (const mmt::ConfigError& e) {
    return fail(MMT_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MMT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MMT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MMT_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw mmt::ArgumentError(std::string(what) + " must not be null");
}

std::string optional_path(const char* p) { return p ? std::string(p) : std::string(); }

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

mmt::EmbeddingFormat to_format(mmt_embedding_format f) {
  switch (f) {
    case MMT_FORMAT_HEADER: return mmt::EmbeddingFormat::header;
    case MMT_FORMAT_HEADERLESS: return mmt::EmbeddingFormat::headerless;
  }
  throw mmt::ArgumentError("unknown embedding format " + std::to_string(static_cast<int>(f)));
}

mmt::Metric to_metric(mmt_metric m) {
  switch (m) {
    case MMT_METRIC_COSINE: return mmt::Metric::cosine;
    case MMT_METRIC_EUCLIDEAN: return mmt::Metric::euclidean;
  }
  throw mmt::ArgumentError("unknown metric " + std::to_string(static_cast<int>(m)));
}

mmt::ModelKind to_kind(mmt_model_kind k) {
  switch (k) {
    case MMT_MODEL_TEXT_ONLY: return mmt::ModelKind::text_only;
    case MMT_MODEL_DOUBLY_ATTENTIVE: return mmt::ModelKind::doubly_attentive;
    case MMT_MODEL_IMAGINATION: return mmt::ModelKind::imagination;
    case MMT_MODEL_VAG: return mmt::ModelKind::vag;
  }
  throw mmt::ArgumentError("unknown model kind " + std::to_string(static_cast<int>(k)));
}

}  // namespace

extern "C" {

const char* mmt_version(void) { return "0.1.0"; }

const char* mmt_last_error(void) { return g_last_error.c_str(); }

void mmt_string_free(char* s) { std::free(s); }

mmt_status mmt_embeddings_load(const char* path, mmt_embedding_format format, mmt_embeddings** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<mmt_embeddings>();
    handle->value = mmt::parse_embedding_text(path, to_format(format), &handle->warnings);
    *out = handle.release();
  });
}

mmt_status mmt_embeddings_save(const mmt_embeddings* e, const char* path, mmt_embedding_format format) {
  return guarded([&] {
    require(e, "embeddings");
    require(path, "path");
    mmt::write_embedding_text(e->value, path, to_format(format));
  });
}

void mmt_embeddings_free(mmt_embeddings* e) { delete e; }

size_t mmt_embeddings_count(const mmt_embeddings* e) { return e ? e->value.size() : 0; }

size_t mmt_embeddings_dim(const mmt_embeddings* e) { return e ? e->value.dim() : 0; }

const char* mmt_embeddings_word(const mmt_embeddings* e, size_t index) {
  if (!e || index >= e->value.size()) return nullptr;
  return e->value.words()[index].c_str();
}

mmt_status mmt_embeddings_row(const mmt_embeddings* e, size_t index, double* out, size_t out_len) {
  return guarded([&] {
    require(e, "embeddings");
    require(out, "out");
    if (index >= e->value.size()) {
      throw mmt::ArgumentError("row " + std::to_string(index) + " out of range for " +
                               std::to_string(e->value.size()) + " words");
    }
    if (out_len < e->value.dim()) {
      throw mmt::DimensionError("buffer holds " + std::to_string(out_len) + " values, row has " +
                                std::to_string(e->value.dim()));
    }
    const auto row = e->value.vector(index);
    std::copy(row.begin(), row.end(), out);
  });
}

size_t mmt_embeddings_warning_count(const mmt_embeddings* e) { return e ? e->warnings.size() : 0; }

const char* mmt_embeddings_warning(const mmt_embeddings* e, size_t index) {
  if (!e || index >= e->warnings.size()) return nullptr;
  return e->warnings[index].c_str();
}

mmt_status mmt_embeddings_debias(const mmt_embeddings* in, mmt_debias_method method, size_t param,
                                 mmt_metric metric, mmt_embeddings** out) {
  return guarded([&] {
    require(in, "embeddings");
    require(out, "out");
    *out = nullptr;
    mmt::DebiasMethod m;
    switch (method) {
      case MMT_DEBIAS_NONE: m = mmt::NoDebias{}; break;
      case MMT_DEBIAS_LOCALIZED_CENTERING: m = mmt::LocalizedCentering{param, to_metric(metric)}; break;
      case MMT_DEBIAS_ALL_BUT_THE_TOP: m = mmt::AllButTheTop{param}; break;
      default: throw mmt::ArgumentError("unknown debias method " + std::to_string(static_cast<int>(method)));
    }
    auto handle = std::make_unique<mmt_embeddings>();
    handle->value = mmt::pipeline::debias_pretrained(in->value, m);
    *out = handle.release();
  });
}

mmt_status mmt_embeddings_hubness_json(const mmt_embeddings* e, size_t k, mmt_metric metric, size_t top,
                                       char** json_out) {
  return guarded([&] {
    require(e, "embeddings");
    require(json_out, "json_out");
    *json_out = nullptr;
    const auto report = mmt::pipeline::hubness_of_pretrained(e->value, k, to_metric(metric));
    *json_out = copy_string(report.to_json(top));
  });
}

mmt_status mmt_build_embedding_table(const mmt_embeddings* e, const char* corpus_path, uint64_t min_freq,
                                     size_t max_vocab, const char* out_path, size_t* oov_count) {
  return guarded([&] {
    require(e, "embeddings");
    require(corpus_path, "corpus_path");
    require(out_path, "out_path");
    std::optional<std::size_t> limit;
    if (max_vocab > 0) limit = max_vocab;
    const auto table = mmt::pipeline::build_init_table(corpus_path, e->value, min_freq, limit);
    mmt::write_embedding_text(table, out_path, mmt::EmbeddingFormat::header);
    if (oov_count) *oov_count = table.oov_ids.size();
  });
}

void mmt_train_options_default(mmt_train_options* options) {
  if (!options) return;
  const mmt::ModelConfig model;
  const mmt::TrainConfig train;
  options->kind = MMT_MODEL_TEXT_ONLY;
  options->emb = model.emb;
  options->hidden = model.hidden;
  options->attention = model.attention;
  options->shared_dim = model.shared_dim;
  options->epochs = train.epochs;
  options->batch_size = train.batch_size;
  options->lr = train.lr;
  options->clip_norm = train.clip_norm;
  options->dropout = train.dropout;
  options->lambda = train.lambda;
  options->margin = train.margin;
  options->rho = train.rho;
  options->seed = train.seed;
  options->min_freq = 1;
  options->max_vocab = 0;
}

mmt_status mmt_train(const mmt_train_options* options, const char* source_path, const char* target_path,
                     const char* features_path, const char* source_embedding_path,
                     const char* target_embedding_path, mmt_embedding_format embedding_format,
                     const char* loss_csv_path, mmt_epoch_callback callback, void* user, mmt_model** out) {
  return guarded([&] {
    require(options, "options");
    require(source_path, "source_path");
    require(target_path, "target_path");
    require(out, "out");
    *out = nullptr;

    mmt::pipeline::TrainFiles files;
    files.source = source_path;
    files.target = target_path;
    files.features = optional_path(features_path);
    files.source_embedding = optional_path(source_embedding_path);
    files.target_embedding = optional_path(target_embedding_path);
    files.embedding_format = to_format(embedding_format);

    mmt::pipeline::TrainSetup setup;
    setup.model.kind = to_kind(options->kind);
    setup.model.emb = options->emb;
    setup.model.hidden = options->hidden;
    setup.model.attention = options->attention;
    setup.model.shared_dim = options->shared_dim;
    setup.train.epochs = options->epochs;
    setup.train.batch_size = options->batch_size;
    setup.train.lr = options->lr;
    setup.train.clip_norm = options->clip_norm;
    setup.train.dropout = options->dropout;
    setup.train.lambda = options->lambda;
    setup.train.margin = options->margin;
    setup.train.rho = options->rho;
    setup.train.seed = options->seed;
    setup.train.validate();
    setup.min_freq = options->min_freq;
    if (options->max_vocab > 0) setup.max_vocab = options->max_vocab;

    mmt::EpochCallback on_epoch;
    if (callback) {
      on_epoch = [callback, user](const mmt::EpochLog& log) {
        callback(log.epoch, log.loss_total, log.loss_task, log.loss_latent, user);
      };
    }
    auto outcome = mmt::pipeline::train_from_files(files, setup, on_epoch);
    if (loss_csv_path) mmt::write_file_atomic(loss_csv_path, mmt::format_loss_csv(outcome.log));
    *out = new mmt_model{std::move(outcome.checkpoint), std::move(outcome.warnings)};
  });
}

mmt_status mmt_model_save(const mmt_model* m, const char* path) {
  return guarded([&] {
    require(m, "model");
    require(path, "path");
    mmt::save_checkpoint(m->checkpoint, path);
  });
}

mmt_status mmt_model_load(const char* path, mmt_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new mmt_model{mmt::load_checkpoint(path), {}};
  });
}

void mmt_model_free(mmt_model* m) { delete m; }

mmt_model_kind mmt_model_get_kind(const mmt_model* m) {
  if (!m) return MMT_MODEL_TEXT_ONLY;
  return static_cast<mmt_model_kind>(m->checkpoint.params.config.kind);
}

size_t mmt_model_warning_count(const mmt_model* m) { return m ? m->warnings.size() : 0; }

const char* mmt_model_warning(const mmt_model* m, size_t index) {
  if (!m || index >= m->warnings.size()) return nullptr;
  return m->warnings[index].c_str();
}

mmt_status mmt_translate_file(const mmt_model* m, const char* source_path, const char* features_path,
                              size_t max_len, const char* output_path) {
  return guarded([&] {
    require(m, "model");
    require(source_path, "source_path");
    require(output_path, "output_path");
    mmt::pipeline::translate_file(m->checkpoint, source_path, optional_path(features_path), max_len, output_path);
  });
}

mmt_status mmt_translate_sentence(const mmt_model* m, const char* sentence, const float* features, size_t rows,
                                  size_t dim, size_t max_len, char** out) {
  return guarded([&] {
    require(m, "model");
    require(sentence, "sentence");
    require(out, "out");
    *out = nullptr;
    std::optional<mmt::FeatureSet> feats;
    if (features) {
      if (rows == 0 || dim == 0) throw mmt::ArgumentError("feature rows and dim must be positive");
      feats.emplace(1, static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(dim));
      mmt::Matrix block(rows, dim);
      for (std::size_t i = 0; i < rows * dim; ++i) block.data()[i] = features[i];
      feats->set_item(0, block);
    }
    const auto lines = mmt::pipeline::translate(m->checkpoint, {mmt::tokenize(sentence)},
                                                feats ? &*feats : nullptr, max_len);
    *out = copy_string(lines.front());
  });
}

mmt_status mmt_evaluate_files(const char* hypothesis_path, const char* reference_path,
                              const char* train_corpus_path, const uint64_t* bucket_edges, size_t edge_count,
                              double* bleu, char** json_out) {
  return guarded([&] {
    require(hypothesis_path, "hypothesis_path");
    require(reference_path, "reference_path");
    if (edge_count > 0) require(bucket_edges, "bucket_edges");
    if (json_out) *json_out = nullptr;
    const auto outputs = mmt::read_corpus(hypothesis_path);
    const auto references = mmt::read_corpus(reference_path);
    std::vector<mmt::Sentence> train;
    if (train_corpus_path) train = mmt::read_corpus(train_corpus_path);
    const std::vector<std::uint64_t> edges(bucket_edges, bucket_edges + edge_count);
    const auto result = mmt::pipeline::evaluate(outputs, references, train_corpus_path ? &train : nullptr, edges);
    if (bleu) *bleu = result.bleu;
    if (json_out) *json_out = copy_string(result.to_json());
  });
}

}  // extern "C"
