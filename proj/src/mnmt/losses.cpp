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

#include "mnmt/losses.hpp"

#include "embedding/vocabulary.hpp"
#include "mnmt/layers.hpp"
#include "numerics/errors.hpp"

namespace mmt {

NllResult sequence_nll(Graph& g, std::span<const Var> distributions, std::span<const int> references) {
  if (distributions.size() != references.size()) {
    throw DimensionError("sequence_nll: " + std::to_string(distributions.size()) + " distributions for " +
                         std::to_string(references.size()) + " references");
  }
  NllResult out;
  const std::size_t before = g.clamped_logs();
  Var total = g.constant_scalar(0.0);
  for (std::size_t j = 0; j < references.size(); ++j) {
    if (references[j] == Vocabulary::kPad) continue;
    Var p = g.pick(distributions[j], static_cast<std::size_t>(references[j]));
    total = g.sub(total, g.log_clamped(p, kProbabilityFloor));
  }
  out.loss = total;
  out.clamped = g.clamped_logs() - before;
  return out;
}

Var imagination_margin_loss(Graph& g, Var v_hat, Var positive, std::span<const Var> negatives, double margin) {
  Var total = g.constant_scalar(0.0);
  if (negatives.empty()) return total;
  Var pos = g.cosine(v_hat, positive);
  for (Var neg : negatives) {
    total = g.add(total, g.relu(g.add_const(g.sub(g.cosine(v_hat, neg), pos), margin)));
  }
  return total;
}

PairMarginResult pair_margin_loss(Graph& g, std::span<const Var> text, std::span<const Var> image, double margin) {
  if (text.size() != image.size()) {
    throw DimensionError("pair_margin_loss: " + std::to_string(text.size()) + " texts for " +
                         std::to_string(image.size()) + " images");
  }
  PairMarginResult out;
  out.loss = g.constant_scalar(0.0);
  const std::size_t n = text.size();
  if (n < 2) {
    out.has_negatives = false;
    return out;
  }
  std::vector<Var> matched(n);
  for (std::size_t i = 0; i < n; ++i) matched[i] = g.cosine(image[i], text[i]);
  // Image anchors against other sentences.
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == p) continue;
      Var hinge = g.relu(g.add_const(g.sub(g.cosine(image[p], text[k]), matched[p]), margin));
      out.loss = g.add(out.loss, hinge);
    }
  }
  // Sentence anchors against other images.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t p = 0; p < n; ++p) {
      if (p == k) continue;
      Var hinge = g.relu(g.add_const(g.sub(g.cosine(text[k], image[p]), matched[k]), margin));
      out.loss = g.add(out.loss, hinge);
    }
  }
  return out;
}

PairMarginResult vag_pair_margin_loss(Graph& g, const ModelParams& params, std::span<const Var> t,
                                      std::span<const Var> v, double margin) {
  std::vector<Var> te;
  std::vector<Var> ve;
  for (Var x : t) te.push_back(vag_text_embedding(g, params, x));
  for (Var x : v) ve.push_back(vag_image_embedding(g, params, x));
  return pair_margin_loss(g, te, ve, margin);
}

double multitask_loss(double task, double latent, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ArgumentError("multitask_loss: lambda must be in [0, 1]");
  return lambda * task + (1.0 - lambda) * latent;
}

Var multitask_loss(Graph& g, Var task, Var latent, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ArgumentError("multitask_loss: lambda must be in [0, 1]");
  return g.add(g.mul_const(task, lambda), g.mul_const(latent, 1.0 - lambda));
}

}  // namespace mmt
