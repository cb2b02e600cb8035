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
#include <random>
#include <span>
#include <vector>

#include "mnmt/params.hpp"
#include "numerics/graph.hpp"

namespace mmt {

/// Inverted dropout. A default-constructed Dropout is the identity, which is
/// what evaluation, decoding and gradient checks use.
class Dropout {
 public:
  Dropout() = default;
  Dropout(double rate, std::mt19937_64* rng) : rate_(rate), rng_(rng) {}

  bool active() const { return rng_ != nullptr && rate_ > 0.0; }
  Var apply(Graph& g, Var x);

 private:
  double rate_ = 0.0;
  std::mt19937_64* rng_ = nullptr;
};

/// z = s(W_z x + U_z h), r = s(W_r x + U_r h), h~ = tanh(W x + U (r . h)),
/// h' = (1 - z) . h~ + z . h
Var gru_cell(Graph& g, const GruIds& cell, Var h, Var x);

struct EncoderOutput {
  std::vector<Var> states;  // h_i = [forward_i; backward_i], 2H x 1
  Var stacked;              // 2H x N
  Var mean_state;           // 2H x 1
};

/// Bidirectional GRU over `source` with zero initial states. Throws
/// ArgumentError on an empty sentence.
EncoderOutput encode_bigru(Graph& g, const ModelParams& params, std::span<const int> source,
                           Dropout& dropout);

struct Attention {
  Var weights;  // N x 1, sums to 1
  Var context;  // sum_i weights_i * value_i
};

/// Additive attention: weights = softmax_i(v^T tanh(U q + k_i)), where the
/// columns of `keys` are the already projected k_i = W x_i, and
/// context = values * weights.
Attention additive_attention(Graph& g, std::size_t query_U, std::size_t score_v, Var query, Var keys, Var values);

/// Textual attention of the doubly-attentive decoder over encoder states.
Attention attend_text(Graph& g, const ModelParams& params, Var proposal, const EncoderOutput& enc, Var text_keys);

struct GatedVisualContext {
  Attention attention;  // over the L spatial locations
  Var gate;             // beta_j in (0, 1)
  Var context;          // beta_j * sum_i alpha_i v_i
};

/// `features` is F x L (one column per location); `visual_keys` its projection.
GatedVisualContext attend_visual_gated(Graph& g, const ModelParams& params, Var previous_state, Var proposal,
                                       Var features, Var visual_keys);

/// Per-sentence inputs shared by every decoder step.
struct SourceContext {
  EncoderOutput enc;
  Var keys;             // attention projection of encoder states
  Var features;         // F x L spatial features (doubly-attentive only)
  Var visual_keys;      // A x L
};

SourceContext prepare_source(Graph& g, const ModelParams& params, std::span<const int> source,
                             const Matrix* spatial_features, Dropout& dropout);

struct DecodeStep {
  Var distribution;  // |V_tgt| x 1
  Var state;         // state carried to the next step
};

/// One doubly-attentive step: GRU proposal, textual and gated visual
/// contexts, conditional combination into the final state, output softmax.
DecodeStep da_decoder_step(Graph& g, const ModelParams& params, Var previous_state, int previous_token,
                           const SourceContext& src, Dropout& dropout);

/// One step of the attention decoder shared by text-only NMT, IMAGINATION
/// and VAG-NMT.
DecodeStep bahdanau_decoder_step(Graph& g, const ModelParams& params, Var previous_state, int previous_token,
                                 const SourceContext& src, Dropout& dropout);

/// tanh(W_init mean_state): initial decoder state of text-only NMT,
/// doubly-attentive and IMAGINATION.
Var mean_state_init(Graph& g, const ModelParams& params, const EncoderOutput& enc);

/// tanh(W_v mean_state), the IMAGINATION latent image prediction.
Var imagination_latent(Graph& g, const ModelParams& params, const EncoderOutput& enc);

struct SentenceRepresentation {
  Var weights;  // N x 1
  Var t;        // 2H x 1
};

/// z_i = tanh(W_v v) . tanh(W_h h_i), weights = softmax(z), t = sum_i w_i h_i.
SentenceRepresentation vag_sentence_representation(Graph& g, const ModelParams& params, const EncoderOutput& enc,
                                                   Var global_feature);

/// tanh(W_init(rho t + (1 - rho) mean_state)).
Var vag_decoder_init(Graph& g, const ModelParams& params, Var t, const EncoderOutput& enc, double rho);

/// Projections of t and v into the shared space.
Var vag_text_embedding(Graph& g, const ModelParams& params, Var t);
Var vag_image_embedding(Graph& g, const ModelParams& params, Var global_feature);

}  // namespace mmt
