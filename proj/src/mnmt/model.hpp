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

#include "mnmt/layers.hpp"
#include "mnmt/params.hpp"

namespace mmt {

/// Image features paired with one sentence.
struct VisualInput {
  Matrix spatial;  // L x spatial_dim, one row per location (doubly-attentive)
  Vector global;   // global_dim (IMAGINATION, VAG-NMT)
};

struct Example {
  std::vector<int> source;
  std::vector<int> target;  // without BOS/EOS
  VisualInput visual;
};

struct BatchLoss {
  Var total;
  Var task;    // mean sentence NLL
  Var latent;  // mean margin loss; constant 0 for single-task models
  bool latent_has_negatives = true;
  std::size_t clamped = 0;
};

/// Throws ConfigError if the example lacks the features the model kind needs.
void check_example(const ModelParams& params, const Example& example);

/// Teacher-forced loss of a batch: decoder inputs BOS y_1..y_M, references
/// y_1..y_M EOS. Task and latent terms are averaged over the batch; the total
/// is lambda * task + (1 - lambda) * latent for multitask models.
BatchLoss batch_loss(Graph& g, const ModelParams& params, std::span<const Example* const> batch, Dropout& dropout);

/// batch_loss value without dropout; used by tests and gradient checks.
double evaluate_total_loss(ModelParams& params, std::span<const Example> batch);

/// Decoder initial state for the model kind.
Var decoder_initial_state(Graph& g, const ModelParams& params, const SourceContext& src, const VisualInput& visual);

DecodeStep decoder_step(Graph& g, const ModelParams& params, Var previous_state, int previous_token,
                        const SourceContext& src, Dropout& dropout);

/// Argmax decoding from BOS until EOS or max_len tokens; ties go to the
/// lowest id. The returned ids exclude BOS and EOS.
std::vector<int> greedy_decode(const ModelParams& params, std::span<const int> source, const VisualInput& visual,
                               std::size_t max_len);

}  // namespace mmt
