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

#include "numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "numerics/errors.hpp"

namespace mmt {

Vector finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                  std::span<const double> x, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("finite_difference_gradient: eps must be positive");
  Vector point(x.begin(), x.end());
  Vector grad(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    point[i] = saved + eps;
    const double up = f(point);
    point[i] = saved - eps;
    const double down = f(point);
    point[i] = saved;
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

Vector finite_difference_gradient(const std::function<double()>& f, std::span<double> params, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("finite_difference_gradient: eps must be positive");
  Vector grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + eps;
    const double up = f();
    params[i] = saved - eps;
    const double down = f();
    params[i] = saved;
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace mmt
