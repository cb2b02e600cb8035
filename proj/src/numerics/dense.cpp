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

#include "numerics/dense.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "numerics/errors.hpp"

namespace mmt {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data of length " + std::to_string(data_.size()) +
                         " does not fill " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Matrix& a, const Matrix& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " +
                       b.shape_string());
}

void require_same(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_mismatch(op, a, b);
}

void require_same_length(const char* op, std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": lengths " + std::to_string(a) + " and " +
                         std::to_string(b) + " differ");
  }
}

template <typename F>
Matrix map(const Matrix& a, F f) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_mismatch("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      auto orow = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix affine(const Matrix& w, const Matrix& x, const Matrix& b) {
  return add(matmul(w, x), b);
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same("add", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same("sub", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same("hadamard", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Matrix scale(const Matrix& a, double s) {
  return map(a, [s](double v) { return v * s; });
}

Matrix add_column(const Matrix& m, const Matrix& v) {
  if (v.cols() != 1 || v.rows() != m.rows()) shape_mismatch("add_column", m, v);
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) += v[i];
  return out;
}

Matrix tanh(const Matrix& a) {
  return map(a, [](double v) { return std::tanh(v); });
}

Matrix sigmoid(const Matrix& a) {
  return map(a, [](double v) { return sigmoid(v); });
}

Matrix concat(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_mismatch("concat", a, b);
  Matrix out(a.rows() + b.rows(), a.cols());
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

Matrix mean_columns(const Matrix& m) {
  if (m.cols() == 0) throw ArgumentError("mean_columns: matrix has no columns");
  Matrix out(m.rows(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
    out[i] = s / static_cast<double>(m.cols());
  }
  return out;
}

Vector concat(std::span<const double> a, std::span<const double> b) {
  Vector out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Vector tanh(std::span<const double> a) {
  Vector out(a.size());
  std::transform(a.begin(), a.end(), out.begin(), [](double v) { return std::tanh(v); });
  return out;
}

Vector sigmoid(std::span<const double> a) {
  Vector out(a.size());
  std::transform(a.begin(), a.end(), out.begin(), [](double v) { return sigmoid(v); });
  return out;
}

Vector hadamard(std::span<const double> a, std::span<const double> b) {
  require_same_length("hadamard", a.size(), b.size());
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Vector mean_rows(const Matrix& m) {
  if (m.rows() == 0) throw ArgumentError("mean_rows: matrix has no rows");
  Vector out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += r[j];
  }
  for (auto& v : out) v /= static_cast<double>(m.rows());
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length("dot", a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vector softmax(std::span<const double> z) {
  if (z.empty()) throw ArgumentError("softmax: empty input");
  const double m = *std::max_element(z.begin(), z.end());
  Vector out(z.size());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - m);
    total += out[i];
  }
  for (auto& v : out) v /= total;
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  require_same_length("cosine_similarity", a.size(), b.size());
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw NumericalError("cosine_similarity: zero-norm input");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

}  // namespace mmt
