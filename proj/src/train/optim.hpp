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

#include <cstdint>
#include <vector>

#include "numerics/graph.hpp"

namespace mmt {

struct AdamOptions {
  double lr = 4e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Moments are allocated on the first step and
/// must keep matching the parameter shapes afterwards.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  /// Applies one update from each Parameter::grad. Throws NumericalError and
  /// leaves every parameter untouched if any gradient is non-finite. Rows
  /// pinned by Parameter::pin_first_row are never changed.
  void step(std::vector<Parameter>& params);

  std::uint64_t steps() const { return t_; }
  const AdamOptions& options() const { return options_; }
  const std::vector<Matrix>& first_moments() const { return m_; }
  const std::vector<Matrix>& second_moments() const { return v_; }

 private:
  AdamOptions options_;
  std::uint64_t t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

/// Global L2 norm over every gradient.
double global_grad_norm(const std::vector<Parameter>& params);

/// Scales all gradients by max_norm / norm when the global norm exceeds
/// max_norm. Returns the norm before clipping.
double clip_grad_norm(std::vector<Parameter>& params, double max_norm = 1.0);

}  // namespace mmt
