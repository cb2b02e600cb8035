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

#include <functional>
#include <span>

#include "numerics/matrix.hpp"

namespace mmt {

/// Central differences (f(x + eps e_i) - f(x - eps e_i)) / (2 eps) at x.
Vector finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                  std::span<const double> x, double eps = 1e-5);

/// In-place variant: perturbs each entry of `params`, evaluates `f`, and
/// restores the entry exactly before moving on.
Vector finite_difference_gradient(const std::function<double()>& f, std::span<double> params, double eps = 1e-5);

/// |a - b| / max(|a|, |b|, floor). The floor keeps entries whose true
/// gradient is zero from dividing by rounding noise.
double relative_error(double a, double b, double floor = 1e-7);

}  // namespace mmt
