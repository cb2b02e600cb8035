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

#include "mnmt/layers.hpp"

#include "numerics/dense.hpp"
#include "numerics/errors.hpp"
#include "numerics/random.hpp"

namespace mmt {

Var Dropout::apply(Graph& g, Var x) {
  if (!active()) return x;
  const Matrix& v = g.value(x);
  Matrix keep(v.rows(), v.cols());
  const double scale = 1.0 / (1.0 - rate_);
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = uniform01(*rng_) < rate_ ? 0.0 : scale;
  return g.mask(x, std::move(keep));
}

Var gru_cell(Graph& g, const GruIds& cell, Var h, Var x) {
  Var z = g.sigmoid(g.add(g.matmul(g.param(cell.Wz), x), g.matmul(g.param(cell.Uz), h)));
  Var r = g.sigmoid(g.add(g.matmul(g.param(cell.Wr), x), g.matmul(g.param(cell.Ur), h)));
  Var candidate = g.tanh(g.add(g.matmul(g.param(cell.W), x), g.matmul(g.param(cell.U), g.hadamard(r, h))));
  return g.add(g.hadamard(g.one_minus(z), candidate), g.hadamard(z, h));
}

EncoderOutput encode_bigru(Graph& g, const ModelParams& params, std::span<const int> source, Dropout& dropout) {
  if (source.empty()) throw ArgumentError("encode_bigru: empty source sentence");
  const auto& ids = params.ids;
  const std::size_t n = source.size();
  const std::size_t hidden = params.config.hidden;

  std::vector<Var> inputs;
  inputs.reserve(n);
  for (int id : source) {
    if (id < 0 || static_cast<std::size_t>(id) >= params.config.src_vocab) {
      throw ArgumentError("encode_bigru: source id " + std::to_string(id) + " outside vocabulary");
    }
    inputs.push_back(dropout.apply(g, g.embedding(ids.enc_emb, static_cast<std::size_t>(id))));
  }

  std::vector<Var> forward(n);
  std::vector<Var> backward(n);
  Var h = g.constant(Matrix(hidden, 1));
  for (std::size_t i = 0; i < n; ++i) forward[i] = h = gru_cell(g, ids.enc_fwd, h, inputs[i]);
  h = g.constant(Matrix(hidden, 1));
  for (std::size_t i = n; i-- > 0;) backward[i] = h = gru_cell(g, ids.enc_bwd, h, inputs[i]);

  EncoderOutput out;
  for (std::size_t i = 0; i < n; ++i) out.states.push_back(g.concat(forward[i], backward[i]));
  out.stacked = g.hstack(out.states);
  out.mean_state = g.mean_columns(out.stacked);
  return out;
}

Attention additive_attention(Graph& g, std::size_t query_U, std::size_t score_v, Var query, Var keys, Var values) {
  Var projected_query = g.matmul(g.param(query_U), query);
  Var hidden = g.tanh(g.add_column(keys, projected_query));                // A x N
  Var scores = g.matmul(g.transpose(hidden), g.param(score_v));            // N x 1
  Var weights = g.softmax(scores);
  return {weights, g.matmul(values, weights)};
}

Attention attend_text(Graph& g, const ModelParams& params, Var proposal, const EncoderOutput& enc, Var text_keys) {
  return additive_attention(g, params.ids.txt_U, params.ids.txt_v, proposal, text_keys, enc.stacked);
}

GatedVisualContext attend_visual_gated(Graph& g, const ModelParams& params, Var previous_state, Var proposal,
                                       Var features, Var visual_keys) {
  const auto& ids = params.ids;
  GatedVisualContext out;
  out.attention = additive_attention(g, ids.vis_U, ids.vis_v, proposal, visual_keys, features);
  out.gate = g.sigmoid(g.add(g.matmul(g.param(ids.gate_W), previous_state), g.param(ids.gate_b)));
  out.context = g.scale(out.attention.context, out.gate);
  return out;
}

SourceContext prepare_source(Graph& g, const ModelParams& params, std::span<const int> source,
                             const Matrix* spatial_features, Dropout& dropout) {
  const auto& ids = params.ids;
  SourceContext ctx;
  ctx.enc = encode_bigru(g, params, source, dropout);
  if (params.config.kind == ModelKind::doubly_attentive) {
    if (!spatial_features || spatial_features->rows() == 0) {
      throw ConfigError("doubly-attentive model needs spatial features");
    }
    if (spatial_features->cols() != params.config.spatial_dim) {
      throw ConfigError("spatial features have dimension " + std::to_string(spatial_features->cols()) +
                        ", model expects " + std::to_string(params.config.spatial_dim));
    }
    ctx.keys = g.matmul(g.param(ids.txt_W), ctx.enc.stacked);
    ctx.features = g.constant(transpose(*spatial_features));
    ctx.visual_keys = g.matmul(g.param(ids.vis_W), ctx.features);
  } else {
    ctx.keys = g.matmul(g.param(ids.att_U), ctx.enc.stacked);
  }
  return ctx;
}

namespace {

Var target_embedding(Graph& g, const ModelParams& params, int token) {
  if (token < 0 || static_cast<std::size_t>(token) >= params.config.tgt_vocab) {
    throw ArgumentError("decoder: target id " + std::to_string(token) + " outside vocabulary");
  }
  return g.embedding(params.ids.dec_emb, static_cast<std::size_t>(token));
}

Var output_distribution(Graph& g, const ModelParams& params, Var pre_output, Dropout& dropout) {
  const auto& ids = params.ids;
  Var logits = g.add(g.matmul(g.param(ids.out_W), dropout.apply(g, pre_output)), g.param(ids.out_b));
  return g.softmax(logits);
}

}  // namespace

DecodeStep da_decoder_step(Graph& g, const ModelParams& params, Var previous_state, int previous_token,
                           const SourceContext& src, Dropout& dropout) {
  const auto& ids = params.ids;
  Var e = target_embedding(g, params, previous_token);
  Var proposal = gru_cell(g, ids.dec, previous_state, e);

  Attention text = attend_text(g, params, proposal, src.enc, src.keys);
  GatedVisualContext visual = attend_visual_gated(g, params, previous_state, proposal, src.features, src.visual_keys);
  Var ct = text.context;
  Var cv = visual.context;

  auto lin = [&](std::size_t w, Var x) { return g.matmul(g.param(w), x); };
  Var z = g.sigmoid(g.add(g.add(lin(ids.comb_Wzt, ct), lin(ids.comb_Wzv, cv)), lin(ids.comb_Wz, proposal)));
  Var r = g.sigmoid(g.add(g.add(lin(ids.comb_Wrt, ct), lin(ids.comb_Wrv, cv)), lin(ids.comb_Wr, proposal)));
  Var candidate =
      g.tanh(g.add(g.add(lin(ids.comb_Wst, ct), lin(ids.comb_Wsv, cv)), g.hadamard(r, lin(ids.comb_U, proposal))));
  Var state = g.add(g.hadamard(g.one_minus(z), candidate), g.hadamard(z, proposal));

  Var pre = g.tanh(g.add(g.add(lin(ids.L_s, state), lin(ids.L_w, e)), g.add(lin(ids.L_t, ct), lin(ids.L_i, cv))));
  return {output_distribution(g, params, pre, dropout), state};
}

DecodeStep bahdanau_decoder_step(Graph& g, const ModelParams& params, Var previous_state, int previous_token,
                                 const SourceContext& src, Dropout& dropout) {
  const auto& ids = params.ids;
  Var e = target_embedding(g, params, previous_token);
  Var state = gru_cell(g, ids.dec, previous_state, e);
  Attention att = additive_attention(g, ids.att_W, ids.att_v, state, src.keys, src.enc.stacked);

  auto lin = [&](std::size_t w, Var x) { return g.matmul(g.param(w), x); };
  Var pre = g.tanh(g.add(g.add(lin(ids.L_s, state), lin(ids.L_w, e)), lin(ids.L_t, att.context)));
  return {output_distribution(g, params, pre, dropout), state};
}

Var mean_state_init(Graph& g, const ModelParams& params, const EncoderOutput& enc) {
  return g.tanh(g.matmul(g.param(params.ids.init_W), enc.mean_state));
}

Var imagination_latent(Graph& g, const ModelParams& params, const EncoderOutput& enc) {
  return g.tanh(g.matmul(g.param(params.ids.latent_W), enc.mean_state));
}

SentenceRepresentation vag_sentence_representation(Graph& g, const ModelParams& params, const EncoderOutput& enc,
                                                   Var global_feature) {
  const auto& ids = params.ids;
  Var image = g.tanh(g.matmul(g.param(ids.vag_att_v), global_feature));      // A x 1
  Var text = g.tanh(g.matmul(g.param(ids.vag_att_h), enc.stacked));          // A x N
  Var scores = g.matmul(g.transpose(text), image);                            // N x 1
  Var weights = g.softmax(scores);
  return {weights, g.matmul(enc.stacked, weights)};
}

Var vag_decoder_init(Graph& g, const ModelParams& params, Var t, const EncoderOutput& enc, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("vag_decoder_init: rho must be in [0, 1]");
  Var mixed = g.add(g.mul_const(t, rho), g.mul_const(enc.mean_state, 1.0 - rho));
  return g.tanh(g.matmul(g.param(params.ids.init_W), mixed));
}

Var vag_text_embedding(Graph& g, const ModelParams& params, Var t) {
  return g.tanh(g.add(g.matmul(g.param(params.ids.vag_Wt), t), g.param(params.ids.vag_bt)));
}

Var vag_image_embedding(Graph& g, const ModelParams& params, Var global_feature) {
  return g.tanh(g.add(g.matmul(g.param(params.ids.vag_Wv), global_feature), g.param(params.ids.vag_bv)));
}

}  // namespace mmt
