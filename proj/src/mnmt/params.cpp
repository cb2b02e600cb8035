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

#include "mnmt/params.hpp"

#include <cmath>
#include <random>

#include "numerics/errors.hpp"
#include "numerics/random.hpp"

namespace mmt {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::text_only: return "nmt";
    case ModelKind::doubly_attentive: return "doubly-attentive";
    case ModelKind::imagination: return "imagination";
    case ModelKind::vag: return "vag";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "nmt" || name == "text" || name == "text-only") return ModelKind::text_only;
  if (name == "da" || name == "doubly-attentive" || name == "doubly_attentive") return ModelKind::doubly_attentive;
  if (name == "imagination") return ModelKind::imagination;
  if (name == "vag" || name == "vag-nmt") return ModelKind::vag;
  throw ConfigError("unknown model kind '" + name + "'");
}

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* what) {
    if (v == 0) throw ConfigError(std::string("model config: ") + what + " must be positive");
  };
  positive(src_vocab, "source vocabulary size");
  positive(tgt_vocab, "target vocabulary size");
  positive(emb, "embedding size");
  positive(hidden, "hidden size");
  positive(attention, "attention size");
  if (uses_spatial()) positive(spatial_dim, "spatial feature size");
  if (uses_global()) positive(global_dim, "global feature size");
  if (kind == ModelKind::vag) positive(shared_dim, "shared space size");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("model config: lambda must be in [0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("model config: rho must be in [0, 1]");
  if (!(margin >= 0.0)) throw ConfigError("model config: margin must be non-negative");
}

std::size_t ModelParams::scalar_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.value.size();
  return n;
}

void ModelParams::zero_grad() {
  for (auto& t : tensors) t.zero_grad();
}

std::size_t ModelParams::find(const std::string& name) const {
  for (std::size_t i = 0; i < tensors.size(); ++i)
    if (tensors[i].name == name) return i;
  throw ArgumentError("model has no tensor '" + name + "'");
}

namespace {

class Builder {
 public:
  Builder(ModelParams& params, std::uint64_t seed) : params_(params), rng_(seed) {}

  std::size_t weight(const std::string& name, std::size_t rows, std::size_t cols, bool pin_first_row = false) {
    Parameter p{name, Matrix(rows, cols), Matrix(rows, cols), pin_first_row};
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (auto& v : p.value.data()) v = uniform(rng_, -bound, bound);
    if (pin_first_row)
      for (auto& v : p.value.row(0)) v = 0.0;
    params_.tensors.push_back(std::move(p));
    return params_.tensors.size() - 1;
  }

  std::size_t bias(const std::string& name, std::size_t rows) {
    params_.tensors.push_back(Parameter{name, Matrix(rows, 1), Matrix(rows, 1), false});
    return params_.tensors.size() - 1;
  }

  GruIds gru(const std::string& prefix, std::size_t input, std::size_t hidden) {
    GruIds g{};
    g.Wz = weight(prefix + ".W_z", hidden, input);
    g.Uz = weight(prefix + ".U_z", hidden, hidden);
    g.Wr = weight(prefix + ".W_r", hidden, input);
    g.Ur = weight(prefix + ".U_r", hidden, hidden);
    g.W = weight(prefix + ".W", hidden, input);
    g.U = weight(prefix + ".U", hidden, hidden);
    return g;
  }

 private:
  ModelParams& params_;
  std::mt19937_64 rng_;
};

}  // namespace

ModelParams make_model(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  ModelParams params;
  params.config = config;
  auto& ids = params.ids;
  Builder b(params, seed);

  const std::size_t E = config.emb;
  const std::size_t H = config.hidden;
  const std::size_t H2 = 2 * H;
  const std::size_t A = config.attention;
  const std::size_t P = config.emb;
  const std::size_t F = config.spatial_dim;
  const std::size_t G = config.global_dim;

  ids.enc_emb = b.weight("enc.embedding", config.src_vocab, E, true);
  ids.enc_fwd = b.gru("enc.fwd", E, H);
  ids.enc_bwd = b.gru("enc.bwd", E, H);
  ids.dec_emb = b.weight("dec.embedding", config.tgt_vocab, E, true);
  ids.dec = b.gru("dec.gru", E, H);
  ids.init_W = b.weight("dec.init.W", H, H2);

  if (config.kind == ModelKind::doubly_attentive) {
    ids.txt_U = b.weight("att.text.U", A, H);
    ids.txt_W = b.weight("att.text.W", A, H2);
    ids.txt_v = b.weight("att.text.v", A, 1);
    ids.vis_U = b.weight("att.visual.U", A, H);
    ids.vis_W = b.weight("att.visual.W", A, F);
    ids.vis_v = b.weight("att.visual.v", A, 1);
    ids.gate_W = b.weight("gate.W", 1, H);
    ids.gate_b = b.bias("gate.b", 1);
    ids.comb_Wzt = b.weight("comb.W_z_text", H, H2);
    ids.comb_Wzv = b.weight("comb.W_z_visual", H, F);
    ids.comb_Wz = b.weight("comb.W_z", H, H);
    ids.comb_Wrt = b.weight("comb.W_r_text", H, H2);
    ids.comb_Wrv = b.weight("comb.W_r_visual", H, F);
    ids.comb_Wr = b.weight("comb.W_r", H, H);
    ids.comb_Wst = b.weight("comb.W_s_text", H, H2);
    ids.comb_Wsv = b.weight("comb.W_s_visual", H, F);
    ids.comb_U = b.weight("comb.U", H, H);
    ids.L_s = b.weight("out.L_s", P, H);
    ids.L_w = b.weight("out.L_w", P, E);
    ids.L_t = b.weight("out.L_t", P, H2);
    ids.L_i = b.weight("out.L_i", P, F);
  } else {
    ids.att_W = b.weight("att.W_a", A, H);
    ids.att_U = b.weight("att.U_a", A, H2);
    ids.att_v = b.weight("att.v_a", A, 1);
    ids.L_s = b.weight("out.L_s", P, H);
    ids.L_w = b.weight("out.L_w", P, E);
    ids.L_t = b.weight("out.L_t", P, H2);
  }
  ids.out_W = b.weight("out.W", config.tgt_vocab, P);
  ids.out_b = b.bias("out.b", config.tgt_vocab);

  if (config.kind == ModelKind::imagination) {
    ids.latent_W = b.weight("latent.W_v", G, H2);
  } else if (config.kind == ModelKind::vag) {
    ids.vag_att_v = b.weight("vag.att.W_v", A, G);
    ids.vag_att_h = b.weight("vag.att.W_h", A, H2);
    ids.vag_Wt = b.weight("vag.shared.W_t", config.shared_dim, H2);
    ids.vag_bt = b.bias("vag.shared.b_t", config.shared_dim);
    ids.vag_Wv = b.weight("vag.shared.W_v", config.shared_dim, G);
    ids.vag_bv = b.bias("vag.shared.b_v", config.shared_dim);
  }
  return params;
}

}  // namespace mmt
