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

#include "numerics/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "numerics/errors.hpp"

namespace mmt {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& symmetric, int max_sweeps, double tolerance) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw DimensionError("jacobi_eigen: matrix " + symmetric.shape_string() + " is not square");

  Matrix a = symmetric;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  // Relative threshold so the tolerance means the same thing at any scale.
  const double scale = std::max(frobenius(a), 1e-300);
  bool converged = off_diagonal_norm(a) <= tolerance * scale;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_norm(a) <= tolerance * scale;
  }
  if (!converged) throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SymmetricEigen out;
  for (std::size_t idx : order) {
    out.values.push_back(a(idx, idx));
    Vector vec(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = v(k, idx);
    double nrm = 0.0;
    for (double x : vec) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : vec) x /= nrm;
    const auto first = std::find_if(vec.begin(), vec.end(), [](double x) { return x != 0.0; });
    if (first != vec.end() && *first < 0.0)
      for (double& x : vec) x = -x;
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

Matrix covariance(const Matrix& centered_rows) {
  const std::size_t n = centered_rows.rows();
  const std::size_t d = centered_rows.cols();
  if (n == 0) throw ArgumentError("covariance: no rows");
  Matrix cov(d, d);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = centered_rows.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] == 0.0) continue;
      for (std::size_t j = i; j < d; ++j) cov(i, j) += x[i] * x[j];
    }
  }
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= denom;
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

PcaBasis pca_top_components(const Matrix& centered_rows, std::size_t n) {
  if (n > std::min(centered_rows.rows(), centered_rows.cols())) {
    throw ArgumentError("pca_top_components: requested " + std::to_string(n) + " components from a " +
                        centered_rows.shape_string() + " matrix");
  }
  PcaBasis basis;
  if (n == 0) return basis;
  auto eig = jacobi_eigen(covariance(centered_rows));
  for (std::size_t i = 0; i < n; ++i) {
    basis.components.push_back(std::move(eig.vectors[i]));
    basis.eigenvalues.push_back(std::max(eig.values[i], 0.0));
  }
  return basis;
}

}  // namespace mmt
