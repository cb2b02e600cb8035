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

#include "numerics/graph.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "numerics/dense.hpp"
#include "numerics/errors.hpp"

namespace mmt {

Graph::Graph(std::vector<Parameter>* params) : params_(params) {
  if (params_) param_nodes_.assign(params_->size(), Var::npos);
}

Var Graph::push(Matrix value, bool needs_grad, Backward back) {
  Node node;
  node.value = std::move(value);
  node.needs_grad = needs_grad;
  if (needs_grad) node.back = std::move(back);
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

void Graph::check(Var v) const {
  if (!v.valid() || v.id >= nodes_.size()) throw ArgumentError("graph: invalid node handle");
}

const Matrix& Graph::val(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.external ? *n.external : n.value;
}

const Matrix& Graph::value(Var v) const {
  check(v);
  return val(v.id);
}

double Graph::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.size() != 1) throw DimensionError("graph: node of shape " + m.shape_string() + " is not a scalar");
  return m[0];
}

Matrix Graph::grad(Var v) const {
  check(v);
  const Node& n = nodes_[v.id];
  if (n.has_grad) return n.grad;
  return Matrix(val(v.id).rows(), val(v.id).cols());
}

Matrix& Graph::grad_slot(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.has_grad) {
    const Matrix& v = val(id);
    n.grad = Matrix(v.rows(), v.cols());
    n.has_grad = true;
  }
  return n.grad;
}

void Graph::accumulate(std::size_t id, const Matrix& g) {
  if (!nodes_[id].needs_grad) return;
  Matrix& slot = grad_slot(id);
  for (std::size_t i = 0; i < g.size(); ++i) slot[i] += g[i];
}

Var Graph::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Graph::param(std::size_t index) {
  if (!params_ || index >= params_->size()) throw ArgumentError("graph: no parameter " + std::to_string(index));
  if (param_nodes_[index] != Var::npos) return Var{param_nodes_[index]};
  Node node;
  node.external = &(*params_)[index].value;
  node.needs_grad = true;
  node.back = [index](Graph& g, const Matrix& out) {
    Parameter& p = (*g.params_)[index];
    if (!p.grad.same_shape(p.value)) p.zero_grad();
    for (std::size_t i = 0; i < out.size(); ++i) p.grad[i] += out[i];
  };
  nodes_.push_back(std::move(node));
  param_nodes_[index] = nodes_.size() - 1;
  return Var{nodes_.size() - 1};
}

Var Graph::embedding(std::size_t index, std::size_t row) {
  if (!params_ || index >= params_->size()) throw ArgumentError("graph: no parameter " + std::to_string(index));
  const Matrix& table = (*params_)[index].value;
  if (row >= table.rows()) {
    throw ArgumentError("graph: embedding row " + std::to_string(row) + " outside table " + table.shape_string());
  }
  return push(Matrix::column(table.row(row)), true, [index, row](Graph& g, const Matrix& out) {
    Parameter& p = (*g.params_)[index];
    if (!p.grad.same_shape(p.value)) p.zero_grad();
    auto r = p.grad.row(row);
    for (std::size_t i = 0; i < out.size(); ++i) r[i] += out[i];
  });
}

Var Graph::matmul(Var a, Var b) {
  check(a);
  check(b);
  return push(mmt::matmul(val(a.id), val(b.id)), needs(a) || needs(b), [a, b](Graph& g, const Matrix& out) {
    if (g.needs(a)) g.accumulate(a.id, mmt::matmul(out, mmt::transpose(g.val(b.id))));
    if (g.needs(b)) g.accumulate(b.id, mmt::matmul(mmt::transpose(g.val(a.id)), out));
  });
}

Var Graph::add(Var a, Var b) {
  check(a);
  check(b);
  return push(mmt::add(val(a.id), val(b.id)), needs(a) || needs(b), [a, b](Graph& g, const Matrix& out) {
    g.accumulate(a.id, out);
    g.accumulate(b.id, out);
  });
}

Var Graph::sub(Var a, Var b) {
  check(a);
  check(b);
  return push(mmt::sub(val(a.id), val(b.id)), needs(a) || needs(b), [a, b](Graph& g, const Matrix& out) {
    g.accumulate(a.id, out);
    if (g.needs(b)) g.accumulate(b.id, mmt::scale(out, -1.0));
  });
}

Var Graph::hadamard(Var a, Var b) {
  check(a);
  check(b);
  return push(mmt::hadamard(val(a.id), val(b.id)), needs(a) || needs(b), [a, b](Graph& g, const Matrix& out) {
    if (g.needs(a)) g.accumulate(a.id, mmt::hadamard(out, g.val(b.id)));
    if (g.needs(b)) g.accumulate(b.id, mmt::hadamard(out, g.val(a.id)));
  });
}

Var Graph::scale(Var v, Var s) {
  check(v);
  check(s);
  if (val(s.id).size() != 1) throw DimensionError("scale: factor of shape " + val(s.id).shape_string() + " is not 1x1");
  return push(mmt::scale(val(v.id), val(s.id)[0]), needs(v) || needs(s), [v, s](Graph& g, const Matrix& out) {
    if (g.needs(v)) g.accumulate(v.id, mmt::scale(out, g.val(s.id)[0]));
    if (g.needs(s)) {
      const Matrix& x = g.val(v.id);
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += out[i] * x[i];
      g.accumulate(s.id, Matrix::scalar(acc));
    }
  });
}

Var Graph::mul_const(Var a, double c) {
  check(a);
  return push(mmt::scale(val(a.id), c), needs(a),
              [a, c](Graph& g, const Matrix& out) { g.accumulate(a.id, mmt::scale(out, c)); });
}

Var Graph::add_const(Var a, double c) {
  check(a);
  Matrix v = val(a.id);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += c;
  return push(std::move(v), needs(a), [a](Graph& g, const Matrix& out) { g.accumulate(a.id, out); });
}

Var Graph::one_minus(Var a) {
  check(a);
  Matrix v = val(a.id);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 - v[i];
  return push(std::move(v), needs(a), [a](Graph& g, const Matrix& out) { g.accumulate(a.id, mmt::scale(out, -1.0)); });
}

Var Graph::add_column(Var m, Var v) {
  check(m);
  check(v);
  return push(mmt::add_column(val(m.id), val(v.id)), needs(m) || needs(v), [m, v](Graph& g, const Matrix& out) {
    g.accumulate(m.id, out);
    if (g.needs(v)) {
      Matrix gv(out.rows(), 1);
      for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) gv[i] += out(i, j);
      g.accumulate(v.id, gv);
    }
  });
}

Var Graph::tanh(Var a) {
  check(a);
  Var y = push(mmt::tanh(val(a.id)), needs(a), nullptr);
  if (needs(a)) {
    nodes_[y.id].back = [a, y](Graph& g, const Matrix& out) {
      const Matrix& t = g.val(y.id);
      Matrix d(out.rows(), out.cols());
      for (std::size_t i = 0; i < out.size(); ++i) d[i] = out[i] * (1.0 - t[i] * t[i]);
      g.accumulate(a.id, d);
    };
  }
  return y;
}

Var Graph::sigmoid(Var a) {
  check(a);
  Var y = push(mmt::sigmoid(val(a.id)), needs(a), nullptr);
  if (needs(a)) {
    nodes_[y.id].back = [a, y](Graph& g, const Matrix& out) {
      const Matrix& s = g.val(y.id);
      Matrix d(out.rows(), out.cols());
      for (std::size_t i = 0; i < out.size(); ++i) d[i] = out[i] * s[i] * (1.0 - s[i]);
      g.accumulate(a.id, d);
    };
  }
  return y;
}

Var Graph::relu(Var a) {
  check(a);
  Matrix v = val(a.id);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(v[i], 0.0);
  return push(std::move(v), needs(a), [a](Graph& g, const Matrix& out) {
    const Matrix& x = g.val(a.id);
    Matrix d(out.rows(), out.cols());
    for (std::size_t i = 0; i < out.size(); ++i) d[i] = x[i] > 0.0 ? out[i] : 0.0;
    g.accumulate(a.id, d);
  });
}

Var Graph::concat(Var a, Var b) {
  check(a);
  check(b);
  return push(mmt::concat(val(a.id), val(b.id)), needs(a) || needs(b), [a, b](Graph& g, const Matrix& out) {
    const Matrix& av = g.val(a.id);
    const Matrix& bv = g.val(b.id);
    if (g.needs(a)) {
      Matrix ga(av.rows(), av.cols());
      std::copy_n(out.data().begin(), ga.size(), ga.data().begin());
      g.accumulate(a.id, ga);
    }
    if (g.needs(b)) {
      Matrix gb(bv.rows(), bv.cols());
      std::copy_n(out.data().begin() + static_cast<std::ptrdiff_t>(av.size()), gb.size(), gb.data().begin());
      g.accumulate(b.id, gb);
    }
  });
}

Var Graph::hstack(std::span<const Var> columns) {
  if (columns.empty()) throw ArgumentError("hstack: no columns");
  const std::size_t rows = value(columns[0]).rows();
  Matrix m(rows, columns.size());
  bool any = false;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const Matrix& c = value(columns[j]);
    if (c.cols() != 1 || c.rows() != rows) {
      throw DimensionError("hstack: column of shape " + c.shape_string() + " does not match " + std::to_string(rows) + "x1");
    }
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = c[i];
    any = any || needs(columns[j]);
  }
  std::vector<Var> cols(columns.begin(), columns.end());
  return push(std::move(m), any, [cols](Graph& g, const Matrix& out) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (!g.needs(cols[j])) continue;
      Matrix gc(out.rows(), 1);
      for (std::size_t i = 0; i < out.rows(); ++i) gc[i] = out(i, j);
      g.accumulate(cols[j].id, gc);
    }
  });
}

Var Graph::transpose(Var a) {
  check(a);
  return push(mmt::transpose(val(a.id)), needs(a),
              [a](Graph& g, const Matrix& out) { g.accumulate(a.id, mmt::transpose(out)); });
}

Var Graph::softmax(Var a) {
  check(a);
  const Matrix& z = val(a.id);
  Matrix y(z.rows(), z.cols(), mmt::softmax(z.data()));
  Var out_var = push(std::move(y), needs(a), nullptr);
  if (needs(a)) {
    nodes_[out_var.id].back = [a, out_var](Graph& g, const Matrix& out) {
      const Matrix& p = g.val(out_var.id);
      double inner = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) inner += out[i] * p[i];
      Matrix d(p.rows(), p.cols());
      for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] * (out[i] - inner);
      g.accumulate(a.id, d);
    };
  }
  return out_var;
}

Var Graph::mean_columns(Var m) {
  check(m);
  return push(mmt::mean_columns(val(m.id)), needs(m), [m](Graph& g, const Matrix& out) {
    const Matrix& x = g.val(m.id);
    Matrix d(x.rows(), x.cols());
    const double inv = 1.0 / static_cast<double>(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) d(i, j) = out[i] * inv;
    g.accumulate(m.id, d);
  });
}

Var Graph::sum(Var a) {
  check(a);
  double s = 0.0;
  for (double v : val(a.id).data()) s += v;
  return push(Matrix::scalar(s), needs(a), [a](Graph& g, const Matrix& out) {
    const Matrix& x = g.val(a.id);
    g.accumulate(a.id, Matrix(x.rows(), x.cols(), out[0]));
  });
}

Var Graph::dot(Var a, Var b) {
  check(a);
  check(b);
  const double d = mmt::dot(val(a.id).data(), val(b.id).data());
  return push(Matrix::scalar(d), needs(a) || needs(b), [a, b](Graph& g, const Matrix& out) {
    if (g.needs(a)) g.accumulate(a.id, mmt::scale(g.val(b.id), out[0]));
    if (g.needs(b)) g.accumulate(b.id, mmt::scale(g.val(a.id), out[0]));
  });
}

Var Graph::cosine(Var a, Var b) {
  check(a);
  check(b);
  const double c = cosine_similarity(val(a.id).data(), val(b.id).data());
  return push(Matrix::scalar(c), needs(a) || needs(b), [a, b, c](Graph& g, const Matrix& out) {
    const Matrix& x = g.val(a.id);
    const Matrix& y = g.val(b.id);
    const double nx = norm(x.data());
    const double ny = norm(y.data());
    // d cos / dx = y / (|x||y|) - cos * x / |x|^2
    if (g.needs(a)) {
      Matrix d(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = out[0] * (y[i] / (nx * ny) - c * x[i] / (nx * nx));
      g.accumulate(a.id, d);
    }
    if (g.needs(b)) {
      Matrix d(y.rows(), y.cols());
      for (std::size_t i = 0; i < y.size(); ++i) d[i] = out[0] * (x[i] / (nx * ny) - c * y[i] / (ny * ny));
      g.accumulate(b.id, d);
    }
  });
}

Var Graph::pick(Var a, std::size_t index) {
  check(a);
  const Matrix& x = val(a.id);
  if (index >= x.size()) throw ArgumentError("pick: index " + std::to_string(index) + " outside " + x.shape_string());
  return push(Matrix::scalar(x[index]), needs(a), [a, index](Graph& g, const Matrix& out) {
    const Matrix& src = g.val(a.id);
    Matrix d(src.rows(), src.cols());
    d[index] = out[0];
    g.accumulate(a.id, d);
  });
}

Var Graph::log_clamped(Var a, double floor) {
  const double x = scalar(a);
  const bool clamped = !(x >= floor);
  if (clamped) ++clamped_logs_;
  return push(Matrix::scalar(std::log(clamped ? floor : x)), needs(a) && !clamped,
              [a, x](Graph& g, const Matrix& out) { g.accumulate(a.id, Matrix::scalar(out[0] / x)); });
}

Var Graph::mask(Var a, Matrix m) {
  check(a);
  Matrix v = mmt::hadamard(val(a.id), m);
  return push(std::move(v), needs(a), [a, m = std::move(m)](Graph& g, const Matrix& out) {
    g.accumulate(a.id, mmt::hadamard(out, m));
  });
}

void Graph::backward(Var loss) {
  check(loss);
  if (val(loss.id).size() != 1) {
    throw ArgumentError("backward: loss node has shape " + val(loss.id).shape_string() + ", expected a scalar");
  }
  for (auto& n : nodes_) {
    n.has_grad = false;
    n.grad = Matrix();
  }
  if (!nodes_[loss.id].needs_grad) return;
  grad_slot(loss.id)[0] = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.has_grad || !n.back) continue;
    n.back(*this, n.grad);
  }
}

}  // namespace mmt
