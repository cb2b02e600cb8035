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
#include <string>
#include <vector>

#include "numerics/graph.hpp"

namespace mmt {

enum class ModelKind : std::uint32_t {
  text_only = 0,         // attention NMT, the decoder shared by IMAGINATION and VAG-NMT
  doubly_attentive = 1,  // textual + gated visual attention over spatial features
  imagination = 2,       // text_only + latent image prediction (multitask)
  vag = 3,               // visually guided sentence representation + multitask
};

std::string to_string(ModelKind kind);
/// Accepts "nmt"/"text", "da"/"doubly-attentive", "imagination", "vag".
ModelKind parse_model_kind(const std::string& name);

struct ModelConfig {
  ModelKind kind = ModelKind::text_only;
  std::size_t src_vocab = 0;
  std::size_t tgt_vocab = 0;
  std::size_t emb = 300;          // also the pre-output size
  std::size_t hidden = 256;       // per direction; encoder states are 2 * hidden
  std::size_t attention = 256;
  std::size_t spatial_dim = 1024; // res4f locations
  std::size_t global_dim = 2048;  // pool5; also the IMAGINATION latent size
  std::size_t shared_dim = 512;   // VAG-NMT joint space
  double lambda = 0.5;
  double margin = 0.1;            // alpha (IMAGINATION) or gamma (VAG-NMT)
  double rho = 0.5;

  bool uses_spatial() const { return kind == ModelKind::doubly_attentive; }
  bool uses_global() const { return kind == ModelKind::imagination || kind == ModelKind::vag; }
  bool multitask() const { return uses_global(); }
  /// Throws ConfigError on zero sizes or out-of-range hyperparameters.
  void validate() const;
};

struct GruIds {
  std::size_t Wz, Uz, Wr, Ur, W, U;
};

/// Index of each named tensor inside ModelParams::tensors; npos when the
/// model kind does not have it.
struct ParamIds {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t enc_emb = npos;
  GruIds enc_fwd{};
  GruIds enc_bwd{};
  std::size_t dec_emb = npos;
  GruIds dec{};
  std::size_t init_W = npos;

  // Additive attention of the shared decoder: v_a^T tanh(W_a s + U_a h).
  std::size_t att_W = npos, att_U = npos, att_v = npos;

  // Doubly-attentive scorers and gate.
  std::size_t txt_U = npos, txt_W = npos, txt_v = npos;
  std::size_t vis_U = npos, vis_W = npos, vis_v = npos;
  std::size_t gate_W = npos, gate_b = npos;
  // Conditional combination of proposal and contexts.
  std::size_t comb_Wzt = npos, comb_Wzv = npos, comb_Wz = npos;
  std::size_t comb_Wrt = npos, comb_Wrv = npos, comb_Wr = npos;
  std::size_t comb_Wst = npos, comb_Wsv = npos, comb_U = npos;

  // Output layer: softmax(out_W tanh(L_s s + L_w e + L_t c [+ L_i c_v]) + out_b).
  std::size_t L_s = npos, L_w = npos, L_t = npos, L_i = npos;
  std::size_t out_W = npos, out_b = npos;

  // IMAGINATION latent projection.
  std::size_t latent_W = npos;

  // VAG-NMT sentence attention and shared-space projections.
  std::size_t vag_att_v = npos, vag_att_h = npos;
  std::size_t vag_Wt = npos, vag_bt = npos, vag_Wv = npos, vag_bv = npos;
};

struct ModelParams {
  ModelConfig config;
  std::vector<Parameter> tensors;
  ParamIds ids;

  const Matrix& value(std::size_t id) const { return tensors.at(id).value; }
  std::size_t scalar_count() const;
  void zero_grad();
  /// Index of the tensor called `name`; throws ArgumentError if absent.
  std::size_t find(const std::string& name) const;
};

/// Allocates every tensor for config.kind in a fixed declaration order and
/// fills weights uniformly in +-sqrt(6 / (fan_in + fan_out)); biases and PAD
/// rows start at zero. The text_only tensors come first and draw the same
/// random numbers in every kind that contains them.
ModelParams make_model(const ModelConfig& config, std::uint64_t seed);

}  // namespace mmt
