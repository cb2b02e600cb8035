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

#include "mnmt/losses.hpp"
#include "numerics/errors.hpp"
#include "support/fixtures.hpp"

using namespace mmt;

namespace {

Var column(Graph& g, Vector v) { return g.constant(Matrix::column(v)); }

double cos2(double ax, double ay, double bx, double by) {
  return (ax * bx + ay * by) / (std::hypot(ax, ay) * std::hypot(bx, by));
}

}  // namespace

TEST_CASE("sequence NLL") {
  Graph g;
  SUBCASE("uniform distributions") {
    std::vector<Var> d(3, column(g, Vector(5, 0.2)));
    const auto r = sequence_nll(g, d, std::vector<int>{1, 4, 2});
    CHECK(std::abs(g.scalar(r.loss) - 3.0 * std::log(5.0)) < 1e-14);
  }
  SUBCASE("perfect predictions") {
    std::vector<Var> d{column(g, {0, 1, 0}), column(g, {1, 0, 0})};
    CHECK(g.scalar(sequence_nll(g, d, std::vector<int>{1, 0}).loss) == 0.0);
  }
  SUBCASE("hand values") {
    std::vector<Var> d{column(g, {0.0, 0.5, 0.5}), column(g, {0.0, 0.75, 0.25})};
    CHECK(std::abs(g.scalar(sequence_nll(g, d, std::vector<int>{1, 2}).loss) - (std::log(2.0) + std::log(4.0))) <
          1e-15);
  }
  SUBCASE("PAD references are skipped") {
    std::vector<Var> d{column(g, {0.1, 0.9}), column(g, {0.5, 0.5})};
    CHECK(g.scalar(sequence_nll(g, d, std::vector<int>{0, 1}).loss) == std::log(2.0));
  }
  SUBCASE("zero probability is clamped and counted") {
    std::vector<Var> d{column(g, {0.0, 0.0, 1.0})};
    const auto r = sequence_nll(g, d, std::vector<int>{1});
    CHECK(g.scalar(r.loss) == -std::log(1e-30));
    CHECK(r.clamped == 1);
  }
  SUBCASE("length mismatch") {
    std::vector<Var> d{column(g, {0.5, 0.5})};
    CHECK_THROWS_AS(sequence_nll(g, d, std::vector<int>{1, 1}), DimensionError);
  }
}

TEST_CASE("imagination margin loss") {
  Graph g;
  SUBCASE("hand value") {
    Var v_hat = column(g, {1, 0});
    Var v = column(g, {0.5, std::sqrt(0.75)});
    Var neg = column(g, {0.7, std::sqrt(0.51)});
    const double got = g.scalar(imagination_margin_loss(g, v_hat, v, std::vector<Var>{neg}, 0.1));
    CHECK(std::abs(got - 0.3) < 1e-15);
  }
  SUBCASE("inactive hinge") {
    Var v = column(g, {0.3, -0.2, 0.9});
    std::vector<Var> negs{column(g, {-0.3, 0.2, 0.1}), column(g, {0.9, 0.1, 0.0})};
    CHECK(g.scalar(imagination_margin_loss(g, v, v, negs, 0.1)) == 0.0);
  }
  SUBCASE("zero vectors are a numerical error") {
    Var z = column(g, {0, 0});
    CHECK_THROWS_AS(imagination_margin_loss(g, z, column(g, {1, 0}), std::vector<Var>{column(g, {0, 1})}, 0.1),
                    NumericalError);
  }
}

TEST_CASE("bidirectional pair margin loss") {
  Graph g;
  SUBCASE("batch of one has no negatives") {
    const auto r = pair_margin_loss(g, std::vector<Var>{column(g, {1, 0})}, std::vector<Var>{column(g, {0, 1})}, 0.1);
    CHECK(g.scalar(r.loss) == 0.0);
    CHECK_FALSE(r.has_negatives);
  }
  SUBCASE("matched pairs far from each other") {
    std::vector<Var> t{column(g, {1, 0}), column(g, {0, 1})};
    const auto r = pair_margin_loss(g, t, t, 0.1);
    CHECK(g.scalar(r.loss) == 0.0);
    CHECK(r.has_negatives);
  }
  SUBCASE("two items by hand") {
    const double t1[2] = {1.0, 0.0}, t2[2] = {0.8, 0.6}, v1[2] = {0.9, 0.5}, v2[2] = {1.0, 0.1};
    const double m = 0.1;
    const double expected =
        std::max(0.0, m - cos2(v1[0], v1[1], t1[0], t1[1]) + cos2(v1[0], v1[1], t2[0], t2[1])) +
        std::max(0.0, m - cos2(v2[0], v2[1], t2[0], t2[1]) + cos2(v2[0], v2[1], t1[0], t1[1])) +
        std::max(0.0, m - cos2(t1[0], t1[1], v1[0], v1[1]) + cos2(t1[0], t1[1], v2[0], v2[1])) +
        std::max(0.0, m - cos2(t2[0], t2[1], v2[0], v2[1]) + cos2(t2[0], t2[1], v1[0], v1[1]));
    std::vector<Var> t{column(g, {t1[0], t1[1]}), column(g, {t2[0], t2[1]})};
    std::vector<Var> v{column(g, {v1[0], v1[1]}), column(g, {v2[0], v2[1]})};
    CHECK(expected > 0.1);
    CHECK(std::abs(g.scalar(pair_margin_loss(g, t, v, m).loss) - expected) < 1e-15);
  }
  SUBCASE("count mismatch") {
    CHECK_THROWS_AS(pair_margin_loss(g, std::vector<Var>{column(g, {1})}, std::vector<Var>{}, 0.1), DimensionError);
  }
}

TEST_CASE("multitask interpolation") {
  CHECK(multitask_loss(2.0, 4.0, 0.5) == 3.0);
  CHECK(multitask_loss(2.0, 4.0, 1.0) == 2.0);
  CHECK(multitask_loss(2.0, 4.0, 0.0) == 4.0);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Vector x = testing::random_vector(2, s, 0.0, 50.0);
    CHECK(multitask_loss(x[0], x[1], 0.5) == (x[0] + x[1]) / 2.0);
  }
  CHECK_THROWS_AS((void)multitask_loss(1.0, 1.0, 1.1), ArgumentError);
  Graph g;
  CHECK(g.scalar(multitask_loss(g, g.constant_scalar(2.0), g.constant_scalar(4.0), 0.5)) == 3.0);
}
