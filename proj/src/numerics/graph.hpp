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
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "numerics/matrix.hpp"

namespace mmt {

/// Trainable tensor. `grad` accumulates across every graph that reads it
/// until the optimizer clears it.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  /// Row 0 never receives updates (PAD row of embedding tables).
  bool pin_first_row = false;

  void zero_grad() { grad = Matrix(value.rows(), value.cols()); }
};

/// Handle to a node recorded on a Graph.
struct Var {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t id = npos;
  bool valid() const { return id != npos; }
};

/// Reverse-mode differentiation tape. Nodes are appended in evaluation order,
/// so index order is a topological order. One graph per training step and
/// thread; graphs are never shared.
class Graph {
 public:
  explicit Graph(std::vector<Parameter>* params = nullptr);

  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Matrix value);
  Var constant_scalar(double value) { return constant(Matrix::scalar(value)); }
  /// Leaf bound to params[index]; repeated calls return the same node.
  Var param(std::size_t index);
  /// Row `row` of params[index], as a column vector.
  Var embedding(std::size_t index, std::size_t row);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var hadamard(Var a, Var b);
  /// Vector times a 1x1 node.
  Var scale(Var v, Var s);
  Var mul_const(Var a, double c);
  Var add_const(Var a, double c);
  /// 1 - a, elementwise.
  Var one_minus(Var a);
  Var add_column(Var m, Var v);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var concat(Var a, Var b);
  /// Column vectors side by side, r x n.
  Var hstack(std::span<const Var> columns);
  Var transpose(Var a);
  Var softmax(Var a);
  Var mean_columns(Var m);
  Var sum(Var a);
  Var dot(Var a, Var b);
  Var cosine(Var a, Var b);
  Var pick(Var a, std::size_t index);
  /// log(max(x, floor)) for a 1x1 node; clamped evaluations are counted and
  /// propagate no gradient.
  Var log_clamped(Var a, double floor = 1e-30);
  /// Elementwise product with a fixed mask (dropout).
  Var mask(Var a, Matrix m);

  const Matrix& value(Var v) const;
  double scalar(Var v) const;
  /// Gradient w.r.t. an interior node after backward(); zeros if none flowed.
  Matrix grad(Var v) const;

  /// Accumulates d loss / d param into every bound Parameter::grad.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  std::size_t clamped_logs() const { return clamped_logs_; }

 private:
  using Backward = std::function<void(Graph&, const Matrix& out_grad)>;

  struct Node {
    Matrix value;
    const Matrix* external = nullptr;
    Matrix grad;
    bool has_grad = false;
    bool needs_grad = false;
    Backward back;
  };

  Var push(Matrix value, bool needs_grad, Backward back);
  const Matrix& val(std::size_t id) const;
  bool needs(Var v) const { return nodes_[v.id].needs_grad; }
  void accumulate(std::size_t id, const Matrix& g);
  Matrix& grad_slot(std::size_t id);
  void check(Var v) const;

  std::vector<Parameter>* params_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> param_nodes_;
  std::size_t clamped_logs_ = 0;
};

}  // namespace mmt
