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
#include <span>
#include <vector>

#include "mnmt/params.hpp"
#include "numerics/graph.hpp"

namespace mmt {

inline constexpr double kProbabilityFloor = 1e-30;

struct NllResult {
  Var loss;
  std::size_t clamped = 0;  // reference probabilities that hit the floor
};

/// -sum_j log p_j(reference_j), skipping PAD references. Probabilities below
/// 1e-30 are clamped and counted.
NllResult sequence_nll(Graph& g, std::span<const Var> distributions, std::span<const int> references);

/// sum over negatives of max(0, margin - cos(v_hat, v) + cos(v_hat, v')).
Var imagination_margin_loss(Graph& g, Var v_hat, Var positive, std::span<const Var> negatives, double margin);

struct PairMarginResult {
  Var loss;
  bool has_negatives = true;  // false for a batch of one
};

/// Bidirectional hinge over a batch of aligned (text, image) embeddings:
///   sum_p sum_{k != p} max(0, m - cos(v_p, t_p) + cos(v_p, t_k))
/// + sum_k sum_{p != k} max(0, m - cos(t_k, v_k) + cos(t_k, v_p))
PairMarginResult pair_margin_loss(Graph& g, std::span<const Var> text, std::span<const Var> image, double margin);

/// Projects each t and v into the shared space, then pair_margin_loss.
PairMarginResult vag_pair_margin_loss(Graph& g, const ModelParams& params, std::span<const Var> t,
                                      std::span<const Var> v, double margin);

/// lambda * task + (1 - lambda) * latent.
double multitask_loss(double task, double latent, double lambda);
Var multitask_loss(Graph& g, Var task, Var latent, double lambda);

}  // namespace mmt
