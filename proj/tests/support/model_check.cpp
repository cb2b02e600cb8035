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

#include "support/model_check.hpp"

#include <random>
#include <vector>

#include "numerics/gradcheck.hpp"

namespace mmt::testing {

namespace {

double run(ModelParams& params, std::span<const Example> batch, std::optional<std::uint64_t> seed, double rate,
           bool backward) {
  std::vector<const Example*> ptrs;
  for (const auto& ex : batch) ptrs.push_back(&ex);
  std::mt19937_64 rng(seed.value_or(0));
  Dropout dropout = seed ? Dropout(rate, &rng) : Dropout();
  Graph g(&params.tensors);
  const BatchLoss loss = batch_loss(g, params, ptrs, dropout);
  if (backward) g.backward(loss.total);
  return g.scalar(loss.total);
}

}  // namespace

double batch_total(ModelParams& params, std::span<const Example> batch, std::optional<std::uint64_t> dropout_seed,
                   double dropout_rate) {
  return run(params, batch, dropout_seed, dropout_rate, false);
}

GradientReport check_model_gradients(ModelParams& params, std::span<const Example> batch,
                                     std::optional<std::uint64_t> dropout_seed, double dropout_rate) {
  params.zero_grad();
  run(params, batch, dropout_seed, dropout_rate, true);
  GradientReport report;
  for (auto& tensor : params.tensors) {
    const auto fd = finite_difference_gradient([&] { return run(params, batch, dropout_seed, dropout_rate, false); },
                                               tensor.value.data());
    for (std::size_t i = 0; i < fd.size(); ++i) {
      const double err = relative_error(tensor.grad.data()[i], fd[i], kModelGradientFloor);
      ++report.checked;
      if (err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst = tensor.name + "[" + std::to_string(i) + "]";
        report.worst_analytic = tensor.grad.data()[i];
        report.worst_numeric = fd[i];
      }
    }
  }
  return report;
}

}  // namespace mmt::testing
