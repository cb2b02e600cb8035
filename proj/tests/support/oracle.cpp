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

#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace mmt::oracle {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cos_sim(const Vec& a, const Vec& b) { return dot(a, b) / std::sqrt(dot(a, a) * dot(b, b)); }

double similarity(const Vec& a, const Vec& b, bool euclidean) {
  if (euclidean) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return -d;
  }
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

Vec mv(const Matrix& w, const Vec& x) {
  Vec y(w.rows(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) y[r] += w(r, c) * x[c];
  return y;
}

Vec plus(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Vec times(Vec a, double s) {
  for (double& x : a) x *= s;
  return a;
}

Vec vtanh(Vec a) {
  for (double& x : a) x = std::tanh(x);
  return a;
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec vsig(Vec a) {
  for (double& x : a) x = sig(x);
  return a;
}

Vec vsoftmax(const Vec& a) {
  Vec e(a.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += e[i] = std::exp(a[i]);
  for (double& x : e) x /= s;
  return e;
}

Vec row_of(const Matrix& m, std::size_t r) {
  Vec v(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) v[c] = m(r, c);
  return v;
}

Vec column_of(const Matrix& m) { return m.to_vector(); }

Vec gru(const ModelParams& p, const GruIds& g, const Vec& h, const Vec& x) {
  const Vec z = vsig(plus(mv(p.value(g.Wz), x), mv(p.value(g.Uz), h)));
  const Vec r = vsig(plus(mv(p.value(g.Wr), x), mv(p.value(g.Ur), h)));
  Vec rh(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) rh[i] = r[i] * h[i];
  const Vec cand = vtanh(plus(mv(p.value(g.W), x), mv(p.value(g.U), rh)));
  Vec out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = (1.0 - z[i]) * cand[i] + z[i] * h[i];
  return out;
}

// softmax_i(v^T tanh(U q + k_i)) where k_i = W x_i, and the weighted sum of x_i.
std::pair<Vec, Vec> attend(const Matrix& U, const Matrix& W, const Matrix& v, const Vec& q, const std::vector<Vec>& xs) {
  const Vec uq = mv(U, q);
  Vec scores;
  for (const Vec& x : xs) scores.push_back(dot(column_of(v), vtanh(plus(mv(W, x), uq))));
  const Vec a = vsoftmax(scores);
  Vec ctx(xs[0].size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) ctx = plus(ctx, times(xs[i], a[i]));
  return {a, ctx};
}

struct Encoded {
  std::vector<Vec> states;
  Vec mean;
};

Encoded encode(const ModelParams& p, const std::vector<int>& src) {
  const auto& ids = p.ids;
  const std::size_t n = src.size();
  const std::size_t h = p.config.hidden;
  std::vector<Vec> f(n), b(n);
  Vec s(h, 0.0);
  for (std::size_t i = 0; i < n; ++i) f[i] = s = gru(p, ids.enc_fwd, s, row_of(p.value(ids.enc_emb), src[i]));
  s.assign(h, 0.0);
  for (std::size_t i = n; i-- > 0;) b[i] = s = gru(p, ids.enc_bwd, s, row_of(p.value(ids.enc_emb), src[i]));
  Encoded e;
  e.mean.assign(2 * h, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Vec st = f[i];
    st.insert(st.end(), b[i].begin(), b[i].end());
    e.mean = plus(e.mean, times(st, 1.0 / static_cast<double>(n)));
    e.states.push_back(std::move(st));
  }
  return e;
}

struct Forward {
  std::vector<Vec> distributions;
  double nll = 0.0;
  Vec latent;  // v_hat or t
};

Forward run(const ModelParams& p, const Example& ex) {
  const auto& ids = p.ids;
  const auto& cfg = p.config;
  const Encoded enc = encode(p, ex.source);
  Forward out;

  Vec s;
  if (cfg.kind == ModelKind::vag) {
    const Vec a = vtanh(mv(p.value(ids.vag_att_v), ex.visual.global));
    Vec z;
    for (const Vec& h : enc.states) z.push_back(dot(a, vtanh(mv(p.value(ids.vag_att_h), h))));
    const Vec beta = vsoftmax(z);
    Vec t(enc.mean.size(), 0.0);
    for (std::size_t i = 0; i < enc.states.size(); ++i) t = plus(t, times(enc.states[i], beta[i]));
    out.latent = t;
    s = vtanh(mv(p.value(ids.init_W), plus(times(t, cfg.rho), times(enc.mean, 1.0 - cfg.rho))));
  } else {
    s = vtanh(mv(p.value(ids.init_W), enc.mean));
    if (cfg.kind == ModelKind::imagination) out.latent = vtanh(mv(p.value(ids.latent_W), enc.mean));
  }

  std::vector<Vec> locations;
  if (cfg.kind == ModelKind::doubly_attentive) {
    for (std::size_t l = 0; l < ex.visual.spatial.rows(); ++l) locations.push_back(row_of(ex.visual.spatial, l));
  }

  int prev = 2;  // BOS
  for (std::size_t j = 0; j <= ex.target.size(); ++j) {
    const Vec e = row_of(p.value(ids.dec_emb), prev);
    Vec pre;
    Vec state;
    if (cfg.kind == ModelKind::doubly_attentive) {
      const Vec prop = gru(p, ids.dec, s, e);
      const Vec ct = attend(p.value(ids.txt_U), p.value(ids.txt_W), p.value(ids.txt_v), prop, enc.states).second;
      const Vec av = attend(p.value(ids.vis_U), p.value(ids.vis_W), p.value(ids.vis_v), prop, locations).second;
      const double beta = sig(mv(p.value(ids.gate_W), s)[0] + p.value(ids.gate_b)(0, 0));
      const Vec cv = times(av, beta);
      auto lin = [&](std::size_t w, const Vec& x) { return mv(p.value(w), x); };
      const Vec z = vsig(plus(plus(lin(ids.comb_Wzt, ct), lin(ids.comb_Wzv, cv)), lin(ids.comb_Wz, prop)));
      const Vec r = vsig(plus(plus(lin(ids.comb_Wrt, ct), lin(ids.comb_Wrv, cv)), lin(ids.comb_Wr, prop)));
      Vec us = lin(ids.comb_U, prop);
      for (std::size_t i = 0; i < us.size(); ++i) us[i] *= r[i];
      const Vec cand = vtanh(plus(plus(lin(ids.comb_Wst, ct), lin(ids.comb_Wsv, cv)), us));
      state.resize(prop.size());
      for (std::size_t i = 0; i < prop.size(); ++i) state[i] = (1.0 - z[i]) * cand[i] + z[i] * prop[i];
      pre = vtanh(plus(plus(lin(ids.L_s, state), lin(ids.L_w, e)), plus(lin(ids.L_t, ct), lin(ids.L_i, cv))));
    } else {
      state = gru(p, ids.dec, s, e);
      const Vec c = attend(p.value(ids.att_W), p.value(ids.att_U), p.value(ids.att_v), state, enc.states).second;
      pre = vtanh(plus(plus(mv(p.value(ids.L_s), state), mv(p.value(ids.L_w), e)), mv(p.value(ids.L_t), c)));
    }
    const Vec dist = vsoftmax(plus(mv(p.value(ids.out_W), pre), column_of(p.value(ids.out_b))));
    const int ref = j < ex.target.size() ? ex.target[j] : 3;  // EOS
    out.nll -= std::log(dist[ref]);
    out.distributions.push_back(dist);
    s = state;
    prev = ref;
  }
  return out;
}

}  // namespace

Rows to_rows(const Matrix& m) {
  Rows r;
  for (std::size_t i = 0; i < m.rows(); ++i) r.push_back(row_of(m, i));
  return r;
}

std::vector<std::size_t> knn(const Rows& rows, std::size_t first, std::size_t query, std::size_t k, bool euclidean) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t j = first; j < rows.size(); ++j) {
    if (j == query) continue;
    scored.emplace_back(similarity(rows[query], rows[j], euclidean), j);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

Rows localized_centering(const Rows& rows, std::size_t first, std::size_t k, bool euclidean) {
  Rows out = rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    Vec centroid(rows[i].size(), 0.0);
    for (std::size_t j : knn(rows, first, i, k, euclidean)) centroid = plus(centroid, rows[j]);
    for (std::size_t c = 0; c < centroid.size(); ++c) out[i][c] = rows[i][c] - centroid[c] / static_cast<double>(k);
  }
  std::fill(out[0].begin(), out[0].end(), 0.0);
  return out;
}

Rows all_but_the_top(const Rows& rows, std::size_t first, std::size_t d) {
  const std::size_t dim = rows[0].size();
  const std::size_t n = rows.size() - first;
  Eigen::MatrixXd x(n, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) x(i, c) = rows[first + i][c];
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mu;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n > 1 ? n - 1 : 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  // Eigen sorts ascending; the top components are the last columns.
  const Eigen::MatrixXd top = solver.eigenvectors().rightCols(d);

  Rows out = rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    Eigen::VectorXd v(dim);
    for (std::size_t c = 0; c < dim; ++c) v(c) = rows[i][c] - mu(c);
    const Eigen::VectorXd r = v - top * (top.transpose() * v);
    for (std::size_t c = 0; c < dim; ++c) out[i][c] = r(c);
  }
  std::fill(out[0].begin(), out[0].end(), 0.0);
  return out;
}

std::vector<double> top_principal_axis(const Rows& points) {
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();
  Eigen::MatrixXd x(n, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) x(i, c) = points[i][c];
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd u = solver.eigenvectors().col(dim - 1);
  return std::vector<double>(u.data(), u.data() + dim);
}

std::vector<std::size_t> k_occurrence(const Rows& rows, std::size_t first, std::size_t k, bool euclidean) {
  std::vector<std::size_t> counts(rows.size(), 0);
  for (std::size_t i = first; i < rows.size(); ++i)
    for (std::size_t j : knn(rows, first, i, k, euclidean)) ++counts[j];
  return counts;
}

Losses total_loss(const ModelParams& params, std::span<const Example> batch) {
  const auto& cfg = params.config;
  const double b = static_cast<double>(batch.size());
  std::vector<Forward> runs;
  Losses out;
  for (const Example& ex : batch) {
    runs.push_back(run(params, ex));
    out.task += runs.back().nll / b;
  }
  if (cfg.kind == ModelKind::imagination) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const double pos = cos_sim(runs[i].latent, batch[i].visual.global);
      for (std::size_t j = 0; j < batch.size(); ++j) {
        if (j == i) continue;
        out.latent += std::max(0.0, cfg.margin - pos + cos_sim(runs[i].latent, batch[j].visual.global)) / b;
      }
    }
  } else if (cfg.kind == ModelKind::vag) {
    std::vector<Vec> te, ve;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      te.push_back(vtanh(plus(mv(params.value(params.ids.vag_Wt), runs[i].latent),
                              column_of(params.value(params.ids.vag_bt)))));
      ve.push_back(vtanh(plus(mv(params.value(params.ids.vag_Wv), batch[i].visual.global),
                              column_of(params.value(params.ids.vag_bv)))));
    }
    for (std::size_t p = 0; p < batch.size(); ++p)
      for (std::size_t k = 0; k < batch.size(); ++k) {
        if (p == k) continue;
        out.latent += std::max(0.0, cfg.margin - cos_sim(ve[p], te[p]) + cos_sim(ve[p], te[k])) / b;
        out.latent += std::max(0.0, cfg.margin - cos_sim(te[p], ve[p]) + cos_sim(te[p], ve[k])) / b;
      }
  }
  out.total = cfg.multitask() ? cfg.lambda * out.task + (1.0 - cfg.lambda) * out.latent : out.task;
  return out;
}

std::vector<std::vector<double>> step_distributions(const ModelParams& params, const Example& ex) {
  return run(params, ex).distributions;
}

}  // namespace mmt::oracle
