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

// mmt: command-line front end over the mmtemb C API.
//
//   mmt debias    --in glove.txt --method abtt --d 3 --out glove.abtt.txt
//   mmt hubness   --in emb.txt --k 10 --metric cosine
//   mmt init      --emb emb.txt --corpus train.en --out table.txt
//   mmt train     --model vag --src train.en --tgt train.de --feats feats.bin --emb-init emb.txt --out model.bin
//   mmt translate --model model.bin --src test.en --feats test.bin --out hyp.de
//   mmt evaluate  --hyp hyp.de --ref test.de --train-corpus train.de
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmtemb/mmtemb.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct DataError {
  std::string message;
};

struct UsageError {
  std::string message;
};

void check(mmt_status status) {
  if (status != MMT_OK) throw DataError{mmt_last_error()};
}

// Frees a C API string on scope exit.
struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { mmt_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError{"cannot open " + tmp + " for writing"};
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError{"write failed: " + tmp};
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError{"cannot rename " + tmp + " to " + path};
  }
}

const std::map<std::string, mmt_embedding_format> kFormats{
    {"header", MMT_FORMAT_HEADER}, {"word2vec", MMT_FORMAT_HEADER}, {"headerless", MMT_FORMAT_HEADERLESS},
    {"glove", MMT_FORMAT_HEADERLESS}};

const std::map<std::string, mmt_metric> kMetrics{{"cosine", MMT_METRIC_COSINE},
                                                 {"euclidean", MMT_METRIC_EUCLIDEAN}};

const std::map<std::string, mmt_debias_method> kMethods{{"none", MMT_DEBIAS_NONE},
                                                        {"lc", MMT_DEBIAS_LOCALIZED_CENTERING},
                                                        {"localized-centering", MMT_DEBIAS_LOCALIZED_CENTERING},
                                                        {"abtt", MMT_DEBIAS_ALL_BUT_THE_TOP},
                                                        {"all-but-the-top", MMT_DEBIAS_ALL_BUT_THE_TOP}};

const std::map<std::string, mmt_model_kind> kModels{{"nmt", MMT_MODEL_TEXT_ONLY},
                                                    {"text-only", MMT_MODEL_TEXT_ONLY},
                                                    {"doubly-attentive", MMT_MODEL_DOUBLY_ATTENTIVE},
                                                    {"da", MMT_MODEL_DOUBLY_ATTENTIVE},
                                                    {"imagination", MMT_MODEL_IMAGINATION},
                                                    {"vag", MMT_MODEL_VAG},
                                                    {"vag-nmt", MMT_MODEL_VAG}};

template <typename T>
T lookup(const std::map<std::string, T>& table, const std::string& key, const char* what) {
  const auto it = table.find(key);
  if (it == table.end()) throw UsageError{std::string("unknown ") + what + " '" + key + "'"};
  return it->second;
}

mmt_embeddings* load_embeddings(const std::string& path, const std::string& format) {
  mmt_embeddings* e = nullptr;
  check(mmt_embeddings_load(path.c_str(), lookup(kFormats, format, "format"), &e));
  for (std::size_t i = 0; i < mmt_embeddings_warning_count(e); ++i) {
    std::cerr << "warning: " << mmt_embeddings_warning(e, i) << "\n";
  }
  return e;
}

struct EmbeddingsGuard {
  mmt_embeddings* e;
  ~EmbeddingsGuard() { mmt_embeddings_free(e); }
};

struct ModelGuard {
  mmt_model* m = nullptr;
  ~ModelGuard() { mmt_model_free(m); }
};

// ---- debias ----

struct DebiasArgs {
  std::string in, out, format = "header", out_format, method = "abtt", metric = "cosine";
  std::size_t k = 10, d = 3;
};

void add_debias(CLI::App& app, DebiasArgs& a) {
  auto* sub = app.add_subcommand("debias", "Post-process pretrained word embeddings");
  sub->add_option("--in", a.in, "Input embedding text file")->required();
  sub->add_option("--out", a.out, "Output embedding text file")->required();
  sub->add_option("--format", a.format, "Input format: header|headerless")->capture_default_str();
  sub->add_option("--out-format", a.out_format, "Output format (defaults to --format)");
  sub->add_option("--method", a.method, "none|lc|abtt")->capture_default_str();
  sub->add_option("--k", a.k, "Neighbors for localized centering")->capture_default_str();
  sub->add_option("--d", a.d, "Components removed by All-but-the-Top")->capture_default_str();
  sub->add_option("--metric", a.metric, "cosine|euclidean (localized centering)")->capture_default_str();
}

int run_debias(const DebiasArgs& a) {
  const auto method = lookup(kMethods, a.method, "method");
  const auto metric = lookup(kMetrics, a.metric, "metric");
  const auto out_format = lookup(kFormats, a.out_format.empty() ? a.format : a.out_format, "format");
  EmbeddingsGuard in{load_embeddings(a.in, a.format)};
  const std::size_t param = method == MMT_DEBIAS_LOCALIZED_CENTERING ? a.k : a.d;
  EmbeddingsGuard out{nullptr};
  check(mmt_embeddings_debias(in.e, method, param, metric, &out.e));
  check(mmt_embeddings_save(out.e, a.out.c_str(), out_format));
  return 0;
}

// ---- hubness ----

struct HubnessArgs {
  std::string in, out, format = "header", metric = "cosine";
  std::size_t k = 10, top = 10;
};

void add_hubness(CLI::App& app, HubnessArgs& a) {
  auto* sub = app.add_subcommand("hubness", "Report k-occurrence skewness and top hubs as JSON");
  sub->add_option("--in", a.in, "Embedding text file")->required();
  sub->add_option("--format", a.format, "header|headerless")->capture_default_str();
  sub->add_option("--k", a.k, "Neighborhood size")->capture_default_str();
  sub->add_option("--metric", a.metric, "cosine|euclidean")->capture_default_str();
  sub->add_option("--top", a.top, "Number of hubs listed")->capture_default_str();
  sub->add_option("--out", a.out, "Output JSON file (stdout if omitted)");
}

int run_hubness(const HubnessArgs& a) {
  const auto metric = lookup(kMetrics, a.metric, "metric");
  EmbeddingsGuard e{load_embeddings(a.in, a.format)};
  OwnedString json;
  check(mmt_embeddings_hubness_json(e.e, a.k, metric, a.top, &json.p));
  if (a.out.empty()) {
    std::cout << json.str();
  } else {
    write_atomic(a.out, json.str());
  }
  return 0;
}

// ---- init ----

struct InitArgs {
  std::string emb, corpus, out, format = "header";
  std::uint64_t min_freq = 1;
  std::size_t max_vocab = 0;
};

void add_init(CLI::App& app, InitArgs& a) {
  auto* sub = app.add_subcommand("init", "Build a vocabulary-aligned initialization table");
  sub->add_option("--emb", a.emb, "Pretrained embedding text file")->required();
  sub->add_option("--corpus", a.corpus, "Tokenized training corpus")->required();
  sub->add_option("--out", a.out, "Output table (header format, specials first)")->required();
  sub->add_option("--format", a.format, "header|headerless")->capture_default_str();
  sub->add_option("--min-freq", a.min_freq, "Minimum token count")->capture_default_str();
  sub->add_option("--max-vocab", a.max_vocab, "Vocabulary cap excluding specials (0 = none)")->capture_default_str();
}

int run_init(const InitArgs& a) {
  EmbeddingsGuard e{load_embeddings(a.emb, a.format)};
  std::size_t oov = 0;
  check(mmt_build_embedding_table(e.e, a.corpus.c_str(), a.min_freq, a.max_vocab, a.out.c_str(), &oov));
  std::cerr << oov << " vocabulary rows filled with the unknown-word mean\n";
  return 0;
}

// ---- train ----

struct TrainArgs {
  std::string config, model = "nmt", src, tgt, feats, emb_init, tgt_emb_init, emb_format = "header", out, log;
  mmt_train_options options{};
  bool quiet = false;
  CLI::App* sub = nullptr;
};

void add_train(CLI::App& app, TrainArgs& a) {
  mmt_train_options_default(&a.options);
  auto& o = a.options;
  auto* sub = app.add_subcommand("train", "Train a model and write a checkpoint plus loss CSV");
  a.sub = sub;
  sub->add_option("--config", a.config, "JSON config; flags given on the command line take precedence");
  sub->add_option("--model", a.model, "nmt|doubly-attentive|imagination|vag")->capture_default_str();
  sub->add_option("--src", a.src, "Source corpus");
  sub->add_option("--tgt", a.tgt, "Target corpus");
  sub->add_option("--feats", a.feats, "MMTF feature file");
  sub->add_option("--emb-init", a.emb_init, "Pretrained source embeddings");
  sub->add_option("--tgt-emb-init", a.tgt_emb_init, "Pretrained target embeddings");
  sub->add_option("--emb-format", a.emb_format, "header|headerless")->capture_default_str();
  sub->add_option("--out", a.out, "Checkpoint path");
  sub->add_option("--log", a.log, "Loss CSV path (default: <out>.loss.csv)");
  sub->add_option("--epochs", o.epochs)->capture_default_str();
  sub->add_option("--batch-size", o.batch_size)->capture_default_str();
  sub->add_option("--lr", o.lr)->capture_default_str();
  sub->add_option("--clip-norm", o.clip_norm)->capture_default_str();
  sub->add_option("--dropout", o.dropout)->capture_default_str();
  sub->add_option("--lambda", o.lambda, "Weight of the translation loss")->capture_default_str();
  sub->add_option("--margin", o.margin, "Ranking margin")->capture_default_str();
  sub->add_option("--rho", o.rho, "VAG-NMT initial-state mix")->capture_default_str();
  sub->add_option("--emb", o.emb, "Embedding size")->capture_default_str();
  sub->add_option("--hidden", o.hidden, "GRU size per direction")->capture_default_str();
  sub->add_option("--attention", o.attention, "Attention size")->capture_default_str();
  sub->add_option("--shared-dim", o.shared_dim, "VAG-NMT joint space size")->capture_default_str();
  sub->add_option("--min-freq", o.min_freq)->capture_default_str();
  sub->add_option("--max-vocab", o.max_vocab, "0 = unlimited")->capture_default_str();
  sub->add_option("--seed", o.seed)->capture_default_str();
  sub->add_flag("--quiet", a.quiet, "No per-epoch progress");
}

// Applies config-file values for every option not given on the command line.
void apply_config(TrainArgs& a) {
  if (a.config.empty()) return;
  std::ifstream in(a.config);
  if (!in) throw DataError{"cannot open config " + a.config};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError{a.config + ": " + e.what()};
  }
  if (!j.is_object()) throw DataError{a.config + ": expected a JSON object"};

  auto& o = a.options;
  const std::map<std::string, std::function<void(const nlohmann::json&)>> setters{
      {"model", [&](const nlohmann::json& v) { a.model = v.get<std::string>(); }},
      {"src", [&](const nlohmann::json& v) { a.src = v.get<std::string>(); }},
      {"tgt", [&](const nlohmann::json& v) { a.tgt = v.get<std::string>(); }},
      {"feats", [&](const nlohmann::json& v) { a.feats = v.get<std::string>(); }},
      {"emb_init", [&](const nlohmann::json& v) { a.emb_init = v.get<std::string>(); }},
      {"tgt_emb_init", [&](const nlohmann::json& v) { a.tgt_emb_init = v.get<std::string>(); }},
      {"emb_format", [&](const nlohmann::json& v) { a.emb_format = v.get<std::string>(); }},
      {"out", [&](const nlohmann::json& v) { a.out = v.get<std::string>(); }},
      {"log", [&](const nlohmann::json& v) { a.log = v.get<std::string>(); }},
      {"epochs", [&](const nlohmann::json& v) { o.epochs = v.get<std::size_t>(); }},
      {"batch_size", [&](const nlohmann::json& v) { o.batch_size = v.get<std::size_t>(); }},
      {"lr", [&](const nlohmann::json& v) { o.lr = v.get<double>(); }},
      {"clip_norm", [&](const nlohmann::json& v) { o.clip_norm = v.get<double>(); }},
      {"dropout", [&](const nlohmann::json& v) { o.dropout = v.get<double>(); }},
      {"lambda", [&](const nlohmann::json& v) { o.lambda = v.get<double>(); }},
      {"margin", [&](const nlohmann::json& v) { o.margin = v.get<double>(); }},
      {"rho", [&](const nlohmann::json& v) { o.rho = v.get<double>(); }},
      {"emb", [&](const nlohmann::json& v) { o.emb = v.get<std::size_t>(); }},
      {"hidden", [&](const nlohmann::json& v) { o.hidden = v.get<std::size_t>(); }},
      {"attention", [&](const nlohmann::json& v) { o.attention = v.get<std::size_t>(); }},
      {"shared_dim", [&](const nlohmann::json& v) { o.shared_dim = v.get<std::size_t>(); }},
      {"min_freq", [&](const nlohmann::json& v) { o.min_freq = v.get<std::uint64_t>(); }},
      {"max_vocab", [&](const nlohmann::json& v) { o.max_vocab = v.get<std::size_t>(); }},
      {"seed", [&](const nlohmann::json& v) { o.seed = v.get<std::uint64_t>(); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError{a.config + ": unknown key '" + key + "'"};
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (a.sub->count(flag) > 0) continue;
    try {
      it->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw DataError{a.config + ": key '" + key + "': " + e.what()};
    }
  }
}

void print_epoch(std::size_t epoch, double total, double task, double latent, void*) {
  std::fprintf(stderr, "epoch %zu  loss %.6f  task %.6f  latent %.6f\n", epoch, total, task, latent);
}

int run_train(TrainArgs& a) {
  apply_config(a);
  if (a.src.empty() || a.tgt.empty() || a.out.empty()) {
    throw UsageError{"train needs --src, --tgt and --out (on the command line or in --config)"};
  }
  a.options.kind = lookup(kModels, a.model, "model");
  const auto format = lookup(kFormats, a.emb_format, "format");
  const std::string log = a.log.empty() ? a.out + ".loss.csv" : a.log;
  auto opt = [](const std::string& s) { return s.empty() ? nullptr : s.c_str(); };

  ModelGuard model;
  check(mmt_train(&a.options, a.src.c_str(), a.tgt.c_str(), opt(a.feats), opt(a.emb_init), opt(a.tgt_emb_init),
                  format, log.c_str(), a.quiet ? nullptr : print_epoch, nullptr, &model.m));
  for (std::size_t i = 0; i < mmt_model_warning_count(model.m); ++i) {
    std::cerr << "warning: " << mmt_model_warning(model.m, i) << "\n";
  }
  check(mmt_model_save(model.m, a.out.c_str()));
  return 0;
}

// ---- translate ----

struct TranslateArgs {
  std::string model, src, feats, out;
  std::size_t max_len = 50;
};

void add_translate(CLI::App& app, TranslateArgs& a) {
  auto* sub = app.add_subcommand("translate", "Greedy-decode a source file, one output line per input line");
  sub->add_option("--model", a.model, "Checkpoint")->required();
  sub->add_option("--src", a.src, "Source file")->required();
  sub->add_option("--feats", a.feats, "MMTF feature file, one item per line");
  sub->add_option("--out", a.out, "Output file")->required();
  sub->add_option("--max-len", a.max_len, "Maximum output tokens")->capture_default_str();
}

int run_translate(const TranslateArgs& a) {
  ModelGuard model;
  check(mmt_model_load(a.model.c_str(), &model.m));
  check(mmt_translate_file(model.m, a.src.c_str(), a.feats.empty() ? nullptr : a.feats.c_str(), a.max_len,
                           a.out.c_str()));
  return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string hyp, ref, train_corpus, out;
  std::vector<std::uint64_t> edges{1, 2, 5, 10, 20, 50, 100};
};

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
  auto* sub = app.add_subcommand("evaluate", "Corpus BLEU and per-word F-score by training frequency");
  sub->add_option("--hyp", a.hyp, "System output")->required();
  sub->add_option("--ref", a.ref, "References")->required();
  sub->add_option("--train-corpus", a.train_corpus, "Target-side training corpus for word frequencies");
  sub->add_option("--edges", a.edges, "Frequency bucket edges")->delimiter(',')->capture_default_str();
  sub->add_option("--out", a.out, "Output JSON file (stdout if omitted)");
}

int run_evaluate(const EvaluateArgs& a) {
  double bleu = 0.0;
  OwnedString json;
  check(mmt_evaluate_files(a.hyp.c_str(), a.ref.c_str(), a.train_corpus.empty() ? nullptr : a.train_corpus.c_str(),
                           a.edges.data(), a.edges.size(), &bleu, &json.p));
  if (a.out.empty()) {
    std::cout << json.str();
  } else {
    write_atomic(a.out, json.str());
    std::printf("BLEU %.2f\n", bleu);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding debiasing, hubness diagnostics and multimodal NMT"};
  app.set_version_flag("--version", std::string(mmt_version()));
  app.require_subcommand(1);

  DebiasArgs debias;
  HubnessArgs hubness;
  InitArgs init;
  TrainArgs train;
  TranslateArgs translate;
  EvaluateArgs evaluate;
  add_debias(app, debias);
  add_hubness(app, hubness);
  add_init(app, init);
  add_train(app, train);
  add_translate(app, translate);
  add_evaluate(app, evaluate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "debias") return run_debias(debias);
    if (name == "hubness") return run_hubness(hubness);
    if (name == "init") return run_init(init);
    if (name == "train") return run_train(train);
    if (name == "translate") return run_translate(translate);
    if (name == "evaluate") return run_evaluate(evaluate);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitData;
  }
  return kExitUsage;
}
