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

#include <cmath>

#include "mnmt/model.hpp"
#include "numerics/errors.hpp"
#include "support/fixtures.hpp"
#include "support/model_check.hpp"
#include "support/oracle.hpp"

using namespace mmt;

namespace {

constexpr ModelKind kAllKinds[] = {ModelKind::text_only, ModelKind::doubly_attentive, ModelKind::imagination,
                                   ModelKind::vag};

}  // namespace

TEST_CASE("batch loss matches the naive forward pass for every kind") {
  for (ModelKind kind : kAllKinds) {
    CAPTURE(to_string(kind));
    const auto cfg = testing::tiny_config(kind);
    auto params = make_model(cfg, 11);
    const auto batch = testing::random_examples(cfg, 3, 12);
    const auto want = oracle::total_loss(params, batch);
    std::vector<const Example*> ptrs;
    for (const auto& ex : batch) ptrs.push_back(&ex);
    Graph g(&params.tensors);
    Dropout none;
    const auto got = batch_loss(g, params, ptrs, none);
    CHECK(std::abs(g.scalar(got.task) - want.task) < 1e-12);
    CHECK(std::abs(g.scalar(got.latent) - want.latent) < 1e-12);
    CHECK(std::abs(g.scalar(got.total) - want.total) < 1e-12);
    CHECK(std::abs(evaluate_total_loss(params, batch) - want.total) < 1e-12);
    if (cfg.multitask()) CHECK(want.latent > 0.0);
  }
}

TEST_CASE("doubly-attentive decoder steps match the naive recomputation") {
  auto cfg = testing::tiny_config(ModelKind::doubly_attentive);
  cfg.src_vocab = cfg.tgt_vocab = 6;
  cfg.hidden = 4;
  auto params = make_model(cfg, 5);
  const auto ex = testing::random_examples(cfg, 1, 6, 3, 3).front();
  const auto want = oracle::step_distributions(params, ex);

  Graph g(&params.tensors);
  Dropout none;
  const auto src = prepare_source(g, params, ex.source, &ex.visual.spatial, none);
  Var state = decoder_initial_state(g, params, src, ex.visual);
  int prev = Vocabulary::kBos;
  for (std::size_t j = 0; j < want.size(); ++j) {
    const auto step = decoder_step(g, params, state, prev, src, none);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(g.value(step.distribution)(i, 0) - want[j][i]) < 1e-14);
    state = step.state;
    prev = j < ex.target.size() ? ex.target[j] : Vocabulary::kEos;
  }
}

TEST_CASE("examples must carry the features their model needs") {
  for (ModelKind kind : {ModelKind::doubly_attentive, ModelKind::imagination, ModelKind::vag}) {
    const auto params = make_model(testing::tiny_config(kind), 1);
    Example ex;
    ex.source = {4, 5};
    ex.target = {6};
    CHECK_THROWS_AS(check_example(params, ex), ConfigError);
  }
  const auto text = make_model(testing::tiny_config(ModelKind::text_only), 1);
  CHECK_NOTHROW(check_example(text, Example{{4}, {5}, {}}));
}

TEST_CASE("lambda = 1 leaves only the translation loss") {
  const auto base_cfg = testing::tiny_config(ModelKind::text_only);
  auto base = make_model(base_cfg, 3);
  auto cfg = testing::tiny_config(ModelKind::imagination);
  cfg.lambda = 1.0;
  auto im = make_model(cfg, 3);
  const auto batch = testing::random_examples(cfg, 3, 4);
  CHECK(evaluate_total_loss(im, batch) == evaluate_total_loss(base, batch));
  cfg.lambda = 0.0;
  im.config.lambda = 0.0;
  const auto parts = oracle::total_loss(im, batch);
  CHECK(std::abs(evaluate_total_loss(im, batch) - parts.latent) < 1e-12);
}

TEST_CASE("text-only model gradients match finite differences") {
  const auto cfg = testing::tiny_config(ModelKind::text_only);
  auto params = make_model(cfg, 9);
  const auto batch = testing::random_examples(cfg, 3, 10);
  const auto r = testing::check_model_gradients(params, batch);
  CAPTURE(r.worst);
  CAPTURE(r.worst_analytic);
  CAPTURE(r.worst_numeric);
  CHECK(r.max_relative_error < 1e-4);
  CHECK(r.checked == params.scalar_count());
}

TEST_CASE("gradients stay exact with fixed dropout masks") {
  const auto cfg = testing::tiny_config(ModelKind::doubly_attentive);
  auto params = make_model(cfg, 9);
  const auto batch = testing::random_examples(cfg, 2, 10);
  CHECK(testing::batch_total(params, batch, 5) == testing::batch_total(params, batch, 5));
  CHECK(testing::batch_total(params, batch, 5) != testing::batch_total(params, batch));
  const auto r = testing::check_model_gradients(params, batch, 5);
  CAPTURE(r.worst);
  CHECK(r.max_relative_error < 1e-4);
}

TEST_CASE("greedy decoding") {
  auto cfg = testing::tiny_config(ModelKind::text_only);
  auto params = make_model(cfg, 2);
  const std::vector<int> src{4, 5, 6};

  SUBCASE("a rigged favourite repeats until the cap") {
    params.tensors[params.ids.out_W].value.fill(0.0);
    params.tensors[params.ids.out_b].value(7, 0) = 5.0;
    CHECK(greedy_decode(params, src, {}, 6) == std::vector<int>(6, 7));
  }
  SUBCASE("EOS first gives an empty output") {
    params.tensors[params.ids.out_W].value.fill(0.0);
    params.tensors[params.ids.out_b].value(Vocabulary::kEos, 0) = 5.0;
    CHECK(greedy_decode(params, src, {}, 6).empty());
  }
  SUBCASE("ties go to the lowest id") {
    params.tensors[params.ids.out_W].value.fill(0.0);
    params.tensors[params.ids.out_b].value(9, 0) = 5.0;
    params.tensors[params.ids.out_b].value(8, 0) = 5.0;
    CHECK(greedy_decode(params, src, {}, 2) == std::vector<int>{8, 8});
  }
  SUBCASE("zero cap") { CHECK_THROWS_AS(greedy_decode(params, src, {}, 0), ArgumentError); }
  SUBCASE("deterministic and bounded") {
    const auto a = greedy_decode(params, src, {}, 10);
    CHECK(a == greedy_decode(params, src, {}, 10));
    CHECK(a.size() <= 10);
  }
}

TEST_CASE("greedy decoding follows the naive argmax") {
  for (ModelKind kind : kAllKinds) {
    CAPTURE(to_string(kind));
    const auto cfg = testing::tiny_config(kind);
    const auto params = make_model(cfg, 21);
    auto ex = testing::random_examples(cfg, 1, 22).front();
    ex.target = greedy_decode(params, ex.source, ex.visual, 5);
    // Teacher forcing on the decoded output reproduces every argmax.
    const auto dists = oracle::step_distributions(params, ex);
    for (std::size_t j = 0; j < ex.target.size(); ++j) {
      const auto& d = dists[j];
      const auto best = static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
      CHECK(best == ex.target[j]);
    }
  }
}
