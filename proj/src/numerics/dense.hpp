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

#include <span>

#include "numerics/matrix.hpp"

// Pure dense kernels. Every differentiable op in graph.hpp computes its
// forward value through these, so graph and non-graph paths agree bitwise.
namespace mmt {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
/// w * x + b, with x and b column vectors.
Matrix affine(const Matrix& w, const Matrix& x, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
/// Adds column vector v to every column of m.
Matrix add_column(const Matrix& m, const Matrix& v);
Matrix tanh(const Matrix& a);
Matrix sigmoid(const Matrix& a);
/// Vertical concatenation; for column vectors this is [a; b].
Matrix concat(const Matrix& a, const Matrix& b);
/// Column mean of an r x n matrix, as an r x 1 column.
Matrix mean_columns(const Matrix& m);

Vector concat(std::span<const double> a, std::span<const double> b);
Vector tanh(std::span<const double> a);
Vector sigmoid(std::span<const double> a);
Vector hadamard(std::span<const double> a, std::span<const double> b);
/// Arithmetic mean of the rows of m.
Vector mean_rows(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double sigmoid(double x);

/// Numerically stable softmax (max subtracted before exponentiation).
Vector softmax(std::span<const double> z);

/// dot(a, b) / (|a| |b|); throws NumericalError when either norm is zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace mmt
