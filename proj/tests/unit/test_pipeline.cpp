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

#include <doctest.h>

#include <json.hpp>

#include "mnmt/features.hpp"
#include "numerics/errors.hpp"
#include "pipeline/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace mmt;
namespace pl = mmt::pipeline;

namespace {

struct Corpus {
  testing::TempDir dir;
  std::string src, tgt, spatial, global, emb;

  Corpus() {
    src = dir.file("train.src");
    tgt = dir.file("train.tgt");
    spatial = dir.file("spatial.bin");
    global = dir.file("global.bin");
    emb = dir.file("emb.txt");
    testing::write_text(src, "a b c\nb c d\nc d a\nd a b\n");
    testing::write_text(tgt, "w x\nx y z\ny z\nz w x\n");
    FeatureSet s(4, 3, 5), g(4, 1, 6);
    for (std::size_t i = 0; i < 4; ++i) {
      s.set_item(i, testing::random_matrix(3, 5, i));
      g.set_item(i, testing::random_matrix(1, 6, i + 10));
    }
    s.save(spatial);
    g.save(global);
    testing::write_text(emb, "4 4\na 1 0 0 0\nb 0 1 0 0\nq 0 0 1 0\nr 0 0 0 1\n");
  }
};

pl::TrainSetup setup(ModelKind kind) {
  pl::TrainSetup s;
  s.model.kind = kind;
  s.model.emb = 4;
  s.model.hidden = 5;
  s.model.attention = 5;
  s.model.shared_dim = 3;
  s.train.epochs = 2;
  s.train.batch_size = 2;
  return s;
}

}  // namespace

TEST_CASE("debiasing a pretrained file keeps its word order") {
  PretrainedEmbeddings e(3);
  for (int i = 0; i < 20; ++i) e.add("w" + std::to_string(19 - i), testing::random_vector(3, i));
  const auto out = pl::debias_pretrained(e, AllButTheTop{1});
  CHECK(out.words() == e.words());
  CHECK(out.dim() == 3);
  CHECK(pl::debias_pretrained(e, NoDebias{}).matrix() == e.matrix());
}

TEST_CASE("training from files for every kind, then translation and evaluation") {
  Corpus c;
  for (ModelKind kind : {ModelKind::text_only, ModelKind::doubly_attentive, ModelKind::imagination, ModelKind::vag}) {
    CAPTURE(to_string(kind));
    pl::TrainFiles files{c.src, c.tgt, "", c.emb, "", EmbeddingFormat::header};
    if (kind == ModelKind::doubly_attentive) files.features = c.spatial;
    if (kind == ModelKind::imagination || kind == ModelKind::vag) files.features = c.global;
    const auto out = pl::train_from_files(files, setup(kind));
    CHECK(out.log.size() == 2);
    CHECK(out.checkpoint.params.config.kind == kind);
    CHECK(out.checkpoint.source_vocab.size() == 8);
    CHECK_FALSE(out.warnings.empty());

    const std::string in = c.dir.file("in.txt");
    testing::write_text(in, "a b\n\nc d a b\nunknownword\n");
    const auto feats = FeatureSet::load(kind == ModelKind::doubly_attentive ? c.spatial : c.global);
    const auto lines = pl::translate(out.checkpoint, read_corpus(in), &feats, 8);
    CHECK(lines.size() == 4);
    CHECK(lines[1].empty());
    if (!files.features.empty()) {
      pl::translate_file(out.checkpoint, in, files.features, 8, c.dir.file("out.txt"));
      CHECK(read_corpus(c.dir.file("out.txt")).size() == 4);
    }
  }
}

TEST_CASE("feature kinds must match the model") {
  Corpus c;
  pl::TrainFiles files{c.src, c.tgt, c.global, "", "", EmbeddingFormat::header};
  CHECK_THROWS_AS(pl::train_from_files(files, setup(ModelKind::doubly_attentive)), ConfigError);
  files.features = c.spatial;
  CHECK_THROWS_AS(pl::train_from_files(files, setup(ModelKind::vag)), ConfigError);
  files.features = "";
  CHECK_THROWS_AS(pl::train_from_files(files, setup(ModelKind::imagination)), ConfigError);
}

TEST_CASE("mismatched corpora and dimensions are rejected") {
  Corpus c;
  testing::write_text(c.tgt, "w x\n");
  pl::TrainFiles files{c.src, c.tgt, "", "", "", EmbeddingFormat::header};
  CHECK_THROWS_AS(pl::train_from_files(files, setup(ModelKind::text_only)), ConfigError);

  Corpus d;
  pl::TrainFiles with_emb{d.src, d.tgt, "", d.emb, "", EmbeddingFormat::header};
  auto s = setup(ModelKind::text_only);
  s.model.emb = 6;
  CHECK_THROWS_AS(pl::train_from_files(with_emb, s), ArgumentError);
}

TEST_CASE("evaluation summary") {
  const auto out = std::vector<Sentence>{tokenize("a b"), tokenize("c")};
  const auto ref = std::vector<Sentence>{tokenize("a c"), tokenize("c")};
  const auto train = std::vector<Sentence>{tokenize("a a c")};
  const auto e = pl::evaluate(out, ref, &train, {1, 2});
  const auto j = nlohmann::json::parse(e.to_json());
  CHECK(j["bleu"].get<double>() == e.bleu);
  CHECK(j["fscore"]["buckets"]["count"] == nlohmann::json::array({1, 1, 1}));
}

TEST_CASE("initialization table from a corpus") {
  Corpus c;
  const auto pre = parse_embedding_text(c.emb, EmbeddingFormat::header);
  const auto t = pl::build_init_table(c.src, pre, 1, std::nullopt);
  CHECK(t.vocab.size() == 8);
  // UNK, BOS, EOS, c, d are filled with the mean of q and r.
  CHECK(t.oov_ids.size() == 5);
  CHECK(t.matrix(t.vocab.find("c").value(), 2) == 0.5);
}
