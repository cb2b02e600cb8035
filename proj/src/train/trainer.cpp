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

#include "train/trainer.hpp"

#include <charconv>
#include <random>

#include "numerics/errors.hpp"
#include "numerics/random.hpp"

namespace mmt {

void TrainConfig::validate() const {
  if (epochs == 0) throw ConfigError("train: epochs must be positive");
  if (batch_size == 0) throw ConfigError("train: batch size must be positive");
  if (!(lr > 0.0)) throw ConfigError("train: learning rate must be positive");
  if (!(clip_norm > 0.0)) throw ConfigError("train: clip norm must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("train: dropout must be in [0, 1)");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("train: lambda must be in [0, 1]");
  if (!(margin >= 0.0)) throw ConfigError("train: margin must be non-negative");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("train: rho must be in [0, 1]");
}

TrainResult train_model(ModelParams params, std::span<const Example> dataset, const TrainConfig& config,
                        const EpochCallback& on_epoch) {
  config.validate();
  if (dataset.empty()) throw ArgumentError("train: empty dataset");
  params.config.lambda = config.lambda;
  params.config.margin = config.margin;
  params.config.rho = config.rho;
  for (const auto& ex : dataset) {
    check_example(params, ex);
    if (ex.source.empty()) throw ArgumentError("train: empty source sentence");
  }

  TrainResult result;
  std::mt19937_64 shuffle_rng(config.seed);
  std::mt19937_64 dropout_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  Dropout dropout(config.dropout, &dropout_rng);
  Adam adam(AdamOptions{config.lr, 0.9, 0.999, 1e-8});
  params.zero_grad();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = permutation(dataset.size(), shuffle_rng);
    EpochLog log;
    log.epoch = epoch;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<const Example*> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        batch.push_back(&dataset[order[i]]);
      }
      Graph g(&params.tensors);
      BatchLoss loss = batch_loss(g, params, batch, dropout);
      g.backward(loss.total);
      result.clamped_probabilities += loss.clamped;
      if (params.config.multitask() && !loss.latent_has_negatives) result.latent_without_negatives = true;

      for (auto& p : params.tensors)
        if (p.pin_first_row)
          for (auto& v : p.grad.row(0)) v = 0.0;
      clip_grad_norm(params.tensors, config.clip_norm);
      adam.step(params.tensors);
      params.zero_grad();

      log.loss_total += g.scalar(loss.total);
      log.loss_task += g.scalar(loss.task);
      log.loss_latent += g.scalar(loss.latent);
      ++batches;
    }
    log.loss_total /= static_cast<double>(batches);
    log.loss_task /= static_cast<double>(batches);
    log.loss_latent /= static_cast<double>(batches);
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  result.optimizer_steps = adam.steps();
  result.params = std::move(params);
  return result;
}

std::string format_loss_csv(std::span<const EpochLog> log) {
  auto num = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
  };
  std::string out = "epoch,loss_total,loss_task,loss_latent\n";
  for (const auto& e : log) {
    out += std::to_string(e.epoch) + "," + num(e.loss_total) + "," + num(e.loss_task) + "," + num(e.loss_latent) + "\n";
  }
  return out;
}

}  // namespace mmt
