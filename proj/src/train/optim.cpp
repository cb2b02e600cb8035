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

#include "train/optim.hpp"

#include <cmath>

#include "numerics/errors.hpp"

namespace mmt {

void Adam::step(std::vector<Parameter>& params) {
  for (const auto& p : params) {
    if (!p.grad.same_shape(p.value)) throw DimensionError("adam: gradient of " + p.name + " has the wrong shape");
    for (double g : p.grad.data()) {
      if (!std::isfinite(g)) throw NumericalError("adam: non-finite gradient in " + p.name + "; step aborted");
    }
  }
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.value.rows(), p.value.cols());
      v_.emplace_back(p.value.rows(), p.value.cols());
    }
  } else if (m_.size() != params.size()) {
    throw DimensionError("adam: parameter count changed between steps");
  }

  ++t_;
  const auto& o = options_;
  const double correction1 = 1.0 - std::pow(o.beta1, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(o.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = params[k];
    Matrix& m = m_[k];
    Matrix& v = v_[k];
    const std::size_t skip = p.pin_first_row ? p.value.cols() : 0;
    for (std::size_t i = skip; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g;
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p.value[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

double global_grad_norm(const std::vector<Parameter>& params) {
  double sq = 0.0;
  for (const auto& p : params)
    for (double g : p.grad.data()) sq += g * g;
  return std::sqrt(sq);
}

double clip_grad_norm(std::vector<Parameter>& params, double max_norm) {
  const double total = global_grad_norm(params);
  if (total > max_norm && total > 0.0) {
    const double factor = max_norm / total;
    for (auto& p : params)
      for (auto& g : p.grad.data()) g *= factor;
  }
  return total;
}

}  // namespace mmt
