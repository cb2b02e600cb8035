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

#include "mnmt/model.hpp"

#include "embedding/vocabulary.hpp"
#include "mnmt/losses.hpp"
#include "numerics/errors.hpp"

namespace mmt {

void check_example(const ModelParams& params, const Example& example) {
  const auto& cfg = params.config;
  if (cfg.uses_spatial()) {
    if (example.visual.spatial.rows() == 0) throw ConfigError(to_string(cfg.kind) + " model needs spatial features");
    if (example.visual.spatial.cols() != cfg.spatial_dim) {
      throw ConfigError("spatial features have dimension " + std::to_string(example.visual.spatial.cols()) +
                        ", model expects " + std::to_string(cfg.spatial_dim));
    }
  }
  if (cfg.uses_global()) {
    if (example.visual.global.empty()) throw ConfigError(to_string(cfg.kind) + " model needs global image features");
    if (example.visual.global.size() != cfg.global_dim) {
      throw ConfigError("global features have dimension " + std::to_string(example.visual.global.size()) +
                        ", model expects " + std::to_string(cfg.global_dim));
    }
  }
}

Var decoder_initial_state(Graph& g, const ModelParams& params, const SourceContext& src, const VisualInput& visual) {
  if (params.config.kind == ModelKind::vag) {
    Var v = g.constant(Matrix::column(visual.global));
    auto rep = vag_sentence_representation(g, params, src.enc, v);
    return vag_decoder_init(g, params, rep.t, src.enc, params.config.rho);
  }
  return mean_state_init(g, params, src.enc);
}

DecodeStep decoder_step(Graph& g, const ModelParams& params, Var previous_state, int previous_token,
                        const SourceContext& src, Dropout& dropout) {
  if (params.config.kind == ModelKind::doubly_attentive) {
    return da_decoder_step(g, params, previous_state, previous_token, src, dropout);
  }
  return bahdanau_decoder_step(g, params, previous_state, previous_token, src, dropout);
}

BatchLoss batch_loss(Graph& g, const ModelParams& params, std::span<const Example* const> batch, Dropout& dropout) {
  if (batch.empty()) throw ArgumentError("batch_loss: empty batch");
  const auto& cfg = params.config;
  BatchLoss out;
  Var task = g.constant_scalar(0.0);
  std::vector<Var> latent_repr;   // v_hat (IMAGINATION) or t (VAG-NMT)
  std::vector<Var> images;

  for (const Example* ex : batch) {
    check_example(params, *ex);
    SourceContext src = prepare_source(g, params, ex->source, &ex->visual.spatial, dropout);

    Var state;
    if (cfg.kind == ModelKind::vag) {
      Var v = g.constant(Matrix::column(ex->visual.global));
      auto rep = vag_sentence_representation(g, params, src.enc, v);
      state = vag_decoder_init(g, params, rep.t, src.enc, cfg.rho);
      latent_repr.push_back(rep.t);
      images.push_back(v);
    } else {
      state = mean_state_init(g, params, src.enc);
      if (cfg.kind == ModelKind::imagination) {
        latent_repr.push_back(imagination_latent(g, params, src.enc));
        images.push_back(g.constant(Matrix::column(ex->visual.global)));
      }
    }

    std::vector<Var> distributions;
    std::vector<int> references;
    int previous = Vocabulary::kBos;
    for (std::size_t j = 0; j <= ex->target.size(); ++j) {
      DecodeStep step = decoder_step(g, params, state, previous, src, dropout);
      distributions.push_back(step.distribution);
      state = step.state;
      const int reference = j < ex->target.size() ? ex->target[j] : Vocabulary::kEos;
      references.push_back(reference);
      previous = reference;
    }
    NllResult nll = sequence_nll(g, distributions, references);
    out.clamped += nll.clamped;
    task = g.add(task, nll.loss);
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  out.task = g.mul_const(task, inv);

  if (cfg.kind == ModelKind::imagination) {
    Var latent = g.constant_scalar(0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      std::vector<Var> negatives;
      for (std::size_t j = 0; j < batch.size(); ++j)
        if (j != i) negatives.push_back(images[j]);
      latent = g.add(latent, imagination_margin_loss(g, latent_repr[i], images[i], negatives, cfg.margin));
    }
    out.latent_has_negatives = batch.size() > 1;
    out.latent = g.mul_const(latent, inv);
  } else if (cfg.kind == ModelKind::vag) {
    auto pair = vag_pair_margin_loss(g, params, latent_repr, images, cfg.margin);
    out.latent_has_negatives = pair.has_negatives;
    out.latent = g.mul_const(pair.loss, inv);
  } else {
    out.latent = g.constant_scalar(0.0);
  }

  out.total = cfg.multitask() ? multitask_loss(g, out.task, out.latent, cfg.lambda) : out.task;
  return out;
}

double evaluate_total_loss(ModelParams& params, std::span<const Example> batch) {
  std::vector<const Example*> ptrs;
  for (const auto& ex : batch) ptrs.push_back(&ex);
  Graph g(&params.tensors);
  Dropout off;
  return g.scalar(batch_loss(g, params, ptrs, off).total);
}

std::vector<int> greedy_decode(const ModelParams& params, std::span<const int> source, const VisualInput& visual,
                               std::size_t max_len) {
  if (max_len == 0) throw ArgumentError("greedy_decode: max_len must be at least 1");
  Example probe{{source.begin(), source.end()}, {}, visual};
  check_example(params, probe);
  // Decoding never calls backward(), so the parameters are only read.
  Graph g(const_cast<std::vector<Parameter>*>(&params.tensors));
  Dropout off;
  SourceContext src = prepare_source(g, params, source, &visual.spatial, off);
  Var state = decoder_initial_state(g, params, src, visual);

  std::vector<int> out;
  int previous = Vocabulary::kBos;
  for (std::size_t j = 0; j < max_len; ++j) {
    DecodeStep step = decoder_step(g, params, state, previous, src, off);
    const Matrix& p = g.value(step.distribution);
    std::size_t best = 0;
    for (std::size_t w = 1; w < p.size(); ++w)
      if (p[w] > p[best]) best = w;
    if (static_cast<int>(best) == Vocabulary::kEos) break;
    out.push_back(static_cast<int>(best));
    previous = static_cast<int>(best);
    state = step.state;
  }
  return out;
}

}  // namespace mmt
