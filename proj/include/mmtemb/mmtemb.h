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

#ifndef MMTEMB_MMTEMB_H_
#define MMTEMB_MMTEMB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MMT_BUILDING_LIBRARY)
#define MMT_API __declspec(dllexport)
#else
#define MMT_API __declspec(dllimport)
#endif
#else
#define MMT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status; on failure mmt_last_error() describes it. */
typedef enum mmt_status {
  MMT_OK = 0,
  MMT_ERR_ARGUMENT = 1,
  MMT_ERR_DIMENSION = 2,
  MMT_ERR_NUMERICAL = 3,
  MMT_ERR_PARSE = 4,
  MMT_ERR_IO = 5,
  MMT_ERR_CONFIG = 6,
  MMT_ERR_INTERNAL = 7
} mmt_status;

typedef enum mmt_embedding_format {
  MMT_FORMAT_HEADER = 0,     /* first line "count dim" (word2vec text) */
  MMT_FORMAT_HEADERLESS = 1  /* GloVe text */
} mmt_embedding_format;

typedef enum mmt_metric { MMT_METRIC_COSINE = 0, MMT_METRIC_EUCLIDEAN = 1 } mmt_metric;

typedef enum mmt_debias_method {
  MMT_DEBIAS_NONE = 0,
  MMT_DEBIAS_LOCALIZED_CENTERING = 1,
  MMT_DEBIAS_ALL_BUT_THE_TOP = 2
} mmt_debias_method;

typedef enum mmt_model_kind {
  MMT_MODEL_TEXT_ONLY = 0,
  MMT_MODEL_DOUBLY_ATTENTIVE = 1,
  MMT_MODEL_IMAGINATION = 2,
  MMT_MODEL_VAG = 3
} mmt_model_kind;

typedef struct mmt_embeddings mmt_embeddings;
typedef struct mmt_model mmt_model;

MMT_API const char* mmt_version(void);

/* Message of the last failed call on this thread; "" if none. */
MMT_API const char* mmt_last_error(void);

/* Frees strings returned through char** out-parameters. */
MMT_API void mmt_string_free(char* s);

/* ---- embeddings ---- */

MMT_API mmt_status mmt_embeddings_load(const char* path, mmt_embedding_format format, mmt_embeddings** out);
MMT_API mmt_status mmt_embeddings_save(const mmt_embeddings* e, const char* path, mmt_embedding_format format);
MMT_API void mmt_embeddings_free(mmt_embeddings* e);
MMT_API size_t mmt_embeddings_count(const mmt_embeddings* e);
MMT_API size_t mmt_embeddings_dim(const mmt_embeddings* e);
/* Borrowed pointer valid until the handle is freed; NULL if out of range. */
MMT_API const char* mmt_embeddings_word(const mmt_embeddings* e, size_t index);
/* Copies dim values of row `index` into `out`. */
MMT_API mmt_status mmt_embeddings_row(const mmt_embeddings* e, size_t index, double* out, size_t out_len);
/* Non-fatal loader diagnostics (duplicates, count mismatch). */
MMT_API size_t mmt_embeddings_warning_count(const mmt_embeddings* e);
MMT_API const char* mmt_embeddings_warning(const mmt_embeddings* e, size_t index);

/* `param` is k for localized centering and D for All-but-the-Top; the
 * metric only matters for localized centering. */
MMT_API mmt_status mmt_embeddings_debias(const mmt_embeddings* in, mmt_debias_method method, size_t param,
                                         mmt_metric metric, mmt_embeddings** out);

/* JSON report listing the `top` strongest hubs. */
MMT_API mmt_status mmt_embeddings_hubness_json(const mmt_embeddings* e, size_t k, mmt_metric metric, size_t top,
                                               char** json_out);

/* Builds the corpus vocabulary and its initialization table (specials
 * first, unknown rows set to the mean of unused pretrained words) and
 * writes it as header-format text. max_vocab 0 means unlimited. */
MMT_API mmt_status mmt_build_embedding_table(const mmt_embeddings* e, const char* corpus_path, uint64_t min_freq,
                                             size_t max_vocab, const char* out_path, size_t* oov_count);

/* ---- training ---- */

typedef struct mmt_train_options {
  mmt_model_kind kind;
  size_t emb;
  size_t hidden;
  size_t attention;
  size_t shared_dim;
  size_t epochs;
  size_t batch_size;
  double lr;
  double clip_norm;
  double dropout;
  double lambda;
  double margin;
  double rho;
  uint64_t seed;
  uint64_t min_freq;
  size_t max_vocab; /* 0 = unlimited */
} mmt_train_options;

MMT_API void mmt_train_options_default(mmt_train_options* options);

/* Optional per-epoch progress hook. */
typedef void (*mmt_epoch_callback)(size_t epoch, double loss_total, double loss_task, double loss_latent,
                                   void* user);

/* features may be NULL for text-only models; embedding paths may be NULL.
 * When loss_csv_path is non-NULL the epoch log is written there. */
MMT_API mmt_status mmt_train(const mmt_train_options* options, const char* source_path, const char* target_path,
                             const char* features_path, const char* source_embedding_path,
                             const char* target_embedding_path, mmt_embedding_format embedding_format,
                             const char* loss_csv_path, mmt_epoch_callback callback, void* user, mmt_model** out);

MMT_API mmt_status mmt_model_save(const mmt_model* m, const char* path);
MMT_API mmt_status mmt_model_load(const char* path, mmt_model** out);
MMT_API void mmt_model_free(mmt_model* m);
MMT_API mmt_model_kind mmt_model_get_kind(const mmt_model* m);
MMT_API size_t mmt_model_warning_count(const mmt_model* m);
MMT_API const char* mmt_model_warning(const mmt_model* m, size_t index);

/* ---- inference and evaluation ---- */

MMT_API mmt_status mmt_translate_file(const mmt_model* m, const char* source_path, const char* features_path,
                                      size_t max_len, const char* output_path);

/* Whitespace-tokenized sentence in, detokenized output in *out. `features`
 * is rows*dim row-major values (NULL for text-only models). */
MMT_API mmt_status mmt_translate_sentence(const mmt_model* m, const char* sentence, const float* features,
                                          size_t rows, size_t dim, size_t max_len, char** out);

/* BLEU plus per-word F-score buckets as JSON. train_corpus_path may be NULL
 * (every word then has training frequency 0). */
MMT_API mmt_status mmt_evaluate_files(const char* hypothesis_path, const char* reference_path,
                                      const char* train_corpus_path, const uint64_t* bucket_edges, size_t edge_count,
                                      double* bleu, char** json_out);

#ifdef __cplusplus
}
#endif

#endif  // MMTEMB_MMTEMB_H_
