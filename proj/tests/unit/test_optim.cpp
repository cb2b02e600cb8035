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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "numerics/errors.hpp"
#include "train/optim.hpp"

using namespace mmt;

namespace {

std::vector<Parameter> single(double value, double grad) {
  Parameter p{"w", Matrix::scalar(value), Matrix::scalar(grad), false};
  return {p};
}

}  // namespace

TEST_CASE("default learning rate and standard moments") {
  const AdamOptions o;
  CHECK(o.lr == 4e-4);
  CHECK(o.beta1 == 0.9);
  CHECK(o.beta2 == 0.999);
  CHECK(o.eps == 1e-8);
}

TEST_CASE("first Adam step in closed form") {
  for (double g : {0.3, -2.0, 1e-6}) {
    auto p = single(1.0, g);
    Adam adam;
    adam.step(p);
    // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
    const double expected = 1.0 - 4e-4 * g / (std::abs(g) + 1e-8);
    CHECK(std::abs(p[0].value(0, 0) - expected) < 1e-15);
    CHECK(adam.steps() == 1);
  }
}

TEST_CASE("zero gradient leaves parameters and decays moments") {
  auto p = single(2.0, 1.0);
  Adam adam;
  adam.step(p);
  const double after_first = p[0].value(0, 0);
  const double m1 = adam.first_moments()[0](0, 0);
  const double v1 = adam.second_moments()[0](0, 0);
  p[0].grad = Matrix::scalar(0.0);
  adam.step(p);
  CHECK(adam.first_moments()[0](0, 0) == 0.9 * m1);
  CHECK(adam.second_moments()[0](0, 0) == 0.999 * v1);
  // The bias-corrected first moment is still non-zero, so the value moves on.
  CHECK(p[0].value(0, 0) != after_first);

  auto fresh = single(2.0, 0.0);
  Adam other;
  other.step(fresh);
  CHECK(fresh[0].value(0, 0) == 2.0);
}

TEST_CASE("non-finite gradients abort the whole step") {
  std::vector<Parameter> p{Parameter{"a", Matrix::scalar(1.0), Matrix::scalar(0.5), false},
                           Parameter{"b", Matrix::scalar(1.0), Matrix::scalar(std::nan("")), false}};
  Adam adam;
  CHECK_THROWS_AS(adam.step(p), NumericalError);
  CHECK(p[0].value(0, 0) == 1.0);
  CHECK(adam.steps() == 0);
  p[1].grad = Matrix::scalar(std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(adam.step(p), NumericalError);
}

TEST_CASE("pinned rows never move") {
  std::vector<Parameter> p{Parameter{"emb", Matrix(2, 2, 1.0), Matrix(2, 2, 1.0), true}};
  Adam adam;
  adam.step(p);
  CHECK(p[0].value(0, 0) == 1.0);
  CHECK(p[0].value(0, 1) == 1.0);
  CHECK(p[0].value(1, 0) < 1.0);
}

TEST_CASE("global norm clipping") {
  SUBCASE("3-4-5") {
    std::vector<Parameter> p{Parameter{"g", Matrix(2, 1), Matrix(2, 1, {3.0, 4.0}), false}};
    CHECK(clip_grad_norm(p, 1.0) == 5.0);
    CHECK(std::abs(p[0].grad(0, 0) - 0.6) < 1e-15);
    CHECK(std::abs(p[0].grad(1, 0) - 0.8) < 1e-15);
  }
  SUBCASE("below the threshold") {
    std::vector<Parameter> p{Parameter{"g", Matrix(2, 1), Matrix(2, 1, {0.3, 0.4}), false}};
    CHECK(clip_grad_norm(p, 1.0) == doctest::Approx(0.5));
    CHECK(p[0].grad == Matrix(2, 1, {0.3, 0.4}));
  }
  SUBCASE("across tensors, never growing any entry") {
    std::vector<Parameter> p{Parameter{"a", Matrix(1, 1), Matrix::scalar(2.0), false},
                             Parameter{"b", Matrix(2, 1), Matrix(2, 1, {-1.0, 2.0}), false}};
    const auto before = p;
    clip_grad_norm(p, 1.0);
    CHECK(std::abs(global_grad_norm(p) - 1.0) < 1e-12);
    for (std::size_t t = 0; t < p.size(); ++t)
      for (std::size_t i = 0; i < p[t].grad.data().size(); ++i)
        CHECK(std::abs(p[t].grad.data()[i]) <= std::abs(before[t].grad.data()[i]));
  }
}
