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
#include <vector>

#include "numerics/matrix.hpp"

namespace mmt {

struct SymmetricEigen {
  Vector values;               // descending
  std::vector<Vector> vectors;  // unit norm, paired with values
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvectors are
/// sign-normalized so their first nonzero coordinate is positive. Throws
/// NumericalError if the off-diagonal mass is still above `tolerance` after
/// `max_sweeps` sweeps.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, int max_sweeps = 100, double tolerance = 1e-12);

struct PcaBasis {
  std::vector<Vector> components;  // u_1..u_n, descending eigenvalue
  Vector eigenvalues;
};

/// Sample covariance (divided by rows - 1) of already-centered rows.
Matrix covariance(const Matrix& centered_rows);

/// Top-n principal components of rows the caller has already centered.
PcaBasis pca_top_components(const Matrix& centered_rows, std::size_t n);

}  // namespace mmt
