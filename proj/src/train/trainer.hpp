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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mnmt/model.hpp"
#include "train/optim.hpp"

namespace mmt {

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double lr = 4e-4;
  double clip_norm = 1.0;
  double dropout = 0.3;
  double lambda = 0.5;
  double margin = 0.1;  // alpha for IMAGINATION, gamma for VAG-NMT
  double rho = 0.5;
  std::uint64_t seed = 1;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double loss_total = 0.0;
  double loss_task = 0.0;    // mean sentence NLL
  double loss_latent = 0.0;  // mean margin loss
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> log;
  std::size_t optimizer_steps = 0;
  std::size_t clamped_probabilities = 0;
  bool latent_without_negatives = false;  // some batch held a single item
};

/// Per-epoch callback, e.g. for progress output.
using EpochCallback = std::function<void(const EpochLog&)>;

/// Mini-batch training: a seeded permutation per epoch, teacher forcing,
/// gradient clipping, then Adam. lambda, margin and rho from `config`
/// overwrite the model's values. Deterministic for a fixed seed.
TrainResult train_model(ModelParams params, std::span<const Example> dataset, const TrainConfig& config,
                        const EpochCallback& on_epoch = nullptr);

/// "epoch,loss_total,loss_task,loss_latent" with 17 significant digits.
std::string format_loss_csv(std::span<const EpochLog> log);

}  // namespace mmt
