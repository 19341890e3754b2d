#pragma once

// Sentence scorer: bidirectional GRU over sentence vectors, a document
// vector from the mean hidden state, and a per-sentence logistic classifier
// with content, salience, novelty, position and numeral terms. The novelty
// term reads a running probability-weighted sum of earlier sentence states,
// so scoring is sequential. Gradients are hand-derived reverse mode.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ectsum/encoder.hpp"
#include "ectsum/error.hpp"
#include "ectsum/extractor/params.hpp"

namespace ectsum {

using Vec = std::vector<double>;

namespace extractor_detail {

// y += M x
inline void matvec_acc(const Tensor& M, const double* x, double* y) {
  for (std::size_t r = 0; r < M.rows; ++r) {
    const double* m = M.row(r);
    double s = 0;
    for (std::size_t c = 0; c < M.cols; ++c) s += m[c] * x[c];
    y[r] += s;
  }
}

// x += M^T y
inline void matTvec_acc(const Tensor& M, const double* y, double* x) {
  for (std::size_t r = 0; r < M.rows; ++r) {
    const double* m = M.row(r);
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (std::size_t c = 0; c < M.cols; ++c) x[c] += m[c] * yr;
  }
}

// G += a b^T
inline void outer_acc(Tensor& G, const double* a, const double* b) {
  for (std::size_t r = 0; r < G.rows; ++r) {
    const double ar = a[r];
    if (ar == 0.0) continue;
    double* g = G.row(r);
    for (std::size_t c = 0; c < G.cols; ++c) g[c] += ar * b[c];
  }
}

inline void add_to(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace extractor_detail

// Per-step gate activations of one GRU direction, indexed by sentence.
struct GruTrace {
  std::vector<Vec> z, r, n, h_prev, h;
};

struct SentenceStates {
  std::vector<Vec> h_f, h_b, h;
  std::vector<int> nu;
  std::vector<std::size_t> p_abs_idx, p_rel_idx;
  std::size_t n = 0;
};

struct ForwardPass {
  SentenceStates states;
  GruTrace fwd, bwd;
  Vec mean_c;               // (1/N) sum [h_f; h_b]
  Vec d;                    // document representation
  std::vector<Vec> sums;    // sum_i, the summary state before sentence i
  Vec scores;
  Vec probs;
};

inline std::size_t absolute_position(std::size_t i, const ExtractorDims& d) {
  return std::min(i, d.max_pos - 1);
}

inline std::size_t relative_position(std::size_t i, std::size_t n) {
  return std::min(kRelativeBins - 1, kRelativeBins * i / n);
}

namespace extractor_detail {

inline GruTrace run_gru(const ExtractorParams& p, std::size_t base,
                        const std::vector<SentenceVec>& x, bool reverse) {
  const std::size_t N = x.size(), H = p.dims.hidden;
  GruTrace t;
  t.z.assign(N, Vec(H));
  t.r.assign(N, Vec(H));
  t.n.assign(N, Vec(H));
  t.h_prev.assign(N, Vec(H));
  t.h.assign(N, Vec(H));
  Vec h(H, 0.0), rh(H);
  for (std::size_t step = 0; step < N; ++step) {
    std::size_t i = reverse ? N - 1 - step : step;
    const double* xi = x[i].values.data();
    t.h_prev[i] = h;
    Vec az(p[base + kBz].data), ar(p[base + kBr].data), an(p[base + kBn].data);
    matvec_acc(p[base + kWz], xi, az.data());
    matvec_acc(p[base + kUz], h.data(), az.data());
    matvec_acc(p[base + kWr], xi, ar.data());
    matvec_acc(p[base + kUr], h.data(), ar.data());
    for (std::size_t k = 0; k < H; ++k) {
      t.z[i][k] = logistic(az[k]);
      t.r[i][k] = logistic(ar[k]);
      rh[k] = t.r[i][k] * h[k];
    }
    matvec_acc(p[base + kWn], xi, an.data());
    matvec_acc(p[base + kUn], rh.data(), an.data());
    for (std::size_t k = 0; k < H; ++k) {
      t.n[i][k] = std::tanh(an[k]);
      h[k] = (1.0 - t.z[i][k]) * t.n[i][k] + t.z[i][k] * h[k];
    }
    t.h[i] = h;
  }
  return t;
}

// Reverse pass through one GRU direction given dL/dh for each sentence's
// output state. Input vectors are constants, so no dx is produced.
inline void backprop_gru(const ExtractorParams& p, ExtractorParams& g, std::size_t base,
                         const std::vector<SentenceVec>& x, const GruTrace& t,
                         const std::vector<Vec>& dh_out, bool reverse) {
  const std::size_t N = x.size(), H = p.dims.hidden;
  Vec carry(H, 0.0), dh(H), dan(H), daz(H), dar(H), drh(H), rh(H);
  // Walk the recurrence backwards: the last processed sentence first.
  for (std::size_t step = 0; step < N; ++step) {
    std::size_t i = reverse ? step : N - 1 - step;
    const double* xi = x[i].values.data();
    const Vec& z = t.z[i];
    const Vec& r = t.r[i];
    const Vec& n = t.n[i];
    const Vec& hp = t.h_prev[i];
    for (std::size_t k = 0; k < H; ++k) dh[k] = dh_out[i][k] + carry[k];

    std::fill(carry.begin(), carry.end(), 0.0);
    for (std::size_t k = 0; k < H; ++k) {
      double dn = dh[k] * (1.0 - z[k]);
      double dz = dh[k] * (hp[k] - n[k]);
      carry[k] += dh[k] * z[k];
      dan[k] = dn * (1.0 - n[k] * n[k]);
      daz[k] = dz * z[k] * (1.0 - z[k]);
      rh[k] = r[k] * hp[k];
    }
    outer_acc(g[base + kWn], dan.data(), xi);
    outer_acc(g[base + kUn], dan.data(), rh.data());
    add_to(g[base + kBn].data.data(), dan.data(), H);
    std::fill(drh.begin(), drh.end(), 0.0);
    matTvec_acc(p[base + kUn], dan.data(), drh.data());
    for (std::size_t k = 0; k < H; ++k) {
      carry[k] += drh[k] * r[k];
      dar[k] = drh[k] * hp[k] * r[k] * (1.0 - r[k]);
    }
    outer_acc(g[base + kWz], daz.data(), xi);
    outer_acc(g[base + kUz], daz.data(), hp.data());
    add_to(g[base + kBz].data.data(), daz.data(), H);
    matTvec_acc(p[base + kUz], daz.data(), carry.data());
    outer_acc(g[base + kWr], dar.data(), xi);
    outer_acc(g[base + kUr], dar.data(), hp.data());
    add_to(g[base + kBr].data.data(), dar.data(), H);
    matTvec_acc(p[base + kUr], dar.data(), carry.data());
  }
}

}  // namespace extractor_detail

inline ForwardPass forward(const std::vector<SentenceVec>& x, const std::vector<int>& nu,
                           const ExtractorParams& p) {
  using namespace extractor_detail;
  const std::size_t N = x.size(), H = p.dims.hidden, P = p.dims.position;
  if (N == 0) throw ShapeError("extractor input document is empty");
  if (nu.size() != N) throw ShapeError("numeral flags and sentence vectors differ in length");
  for (const auto& v : x) {
    if (v.dim() != p.dims.input)
      throw ShapeError("sentence vector dimension " + std::to_string(v.dim()) +
                       " does not match extractor input " + std::to_string(p.dims.input));
    if (!std::isfinite(v.norm)) throw ShapeError("sentence vector has non-finite components");
  }

  ForwardPass f;
  auto& st = f.states;
  st.n = N;
  st.nu = nu;
  f.fwd = run_gru(p, kFwd, x, false);
  f.bwd = run_gru(p, kBwd, x, true);
  st.h_f = f.fwd.h;
  st.h_b = f.bwd.h;

  f.mean_c.assign(2 * H, 0.0);
  st.h.assign(N, Vec(H));
  Vec c(2 * H);
  for (std::size_t i = 0; i < N; ++i) {
    std::copy(st.h_f[i].begin(), st.h_f[i].end(), c.begin());
    std::copy(st.h_b[i].begin(), st.h_b[i].end(), c.begin() + static_cast<long>(H));
    Vec a = p[kBh].data;
    matvec_acc(p[kWh], c.data(), a.data());
    for (std::size_t k = 0; k < H; ++k) st.h[i][k] = std::tanh(a[k]);
    for (std::size_t k = 0; k < 2 * H; ++k) f.mean_c[k] += c[k];
  }
  for (auto& v : f.mean_c) v /= static_cast<double>(N);
  f.d = p[kBd].data;
  matvec_acc(p[kWd], f.mean_c.data(), f.d.data());
  for (auto& v : f.d) v = std::tanh(v);

  // Position read-outs are fixed per slot; precompute them.
  Vec abs_term(p.dims.max_pos), rel_term(kRelativeBins);
  for (std::size_t a = 0; a < p.dims.max_pos; ++a)
    abs_term[a] = dot(p[kPabs].row(a), p[kWap].data.data(), P);
  for (std::size_t r = 0; r < kRelativeBins; ++r)
    rel_term[r] = dot(p[kPrel].row(r), p[kWrp].data.data(), P);

  Vec sal(H, 0.0);  // W_s d
  matvec_acc(p[kWs], f.d.data(), sal.data());

  f.sums.assign(N, Vec(H));
  f.scores.resize(N);
  f.probs.resize(N);
  st.p_abs_idx.resize(N);
  st.p_rel_idx.resize(N);
  Vec sum(H, 0.0), ts(H), nov(H);
  for (std::size_t i = 0; i < N; ++i) {
    f.sums[i] = sum;
    const Vec& h = st.h[i];
    for (std::size_t k = 0; k < H; ++k) ts[k] = std::tanh(sum[k]);
    std::fill(nov.begin(), nov.end(), 0.0);
    matvec_acc(p[kWnov], ts.data(), nov.data());
    st.p_abs_idx[i] = absolute_position(i, p.dims);
    st.p_rel_idx[i] = relative_position(i, N);
    double s = dot(p[kWc].data.data(), h.data(), H) + dot(h.data(), sal.data(), H) -
               dot(h.data(), nov.data(), H) + abs_term[st.p_abs_idx[i]] +
               rel_term[st.p_rel_idx[i]] + p[kWnum].data[0] * nu[i] + p[kBcls].data[0];
    f.scores[i] = s;
    f.probs[i] = logistic(s);
    for (std::size_t k = 0; k < H; ++k) sum[k] += f.probs[i] * h[k];
  }
  return f;
}

inline Vec predict(const std::vector<SentenceVec>& x, const std::vector<int>& nu,
                   const ExtractorParams& p) {
  return forward(x, nu, p).probs;
}

inline constexpr double kLossEpsilon = 1e-12;

inline double clamp_prob(double p) { return std::clamp(p, kLossEpsilon, 1.0 - kLossEpsilon); }

// Mean binary cross-entropy with clamped probabilities.
inline double bce_loss(const Vec& probs, const std::vector<int>& labels) {
  if (probs.size() != labels.size()) throw ShapeError("probabilities and labels differ in length");
  if (probs.empty()) return 0.0;
  double s = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double q = clamp_prob(probs[i]);
    s += labels[i] ? std::log(q) : std::log(1.0 - q);
  }
  return -s / static_cast<double>(probs.size());
}

struct LossGrad {
  double loss = 0;
  ExtractorParams grad;
};

// Loss and exact gradient of loss_scale * bce_loss(forward(x)) w.r.t. every tensor.
inline LossGrad loss_and_gradients(const std::vector<SentenceVec>& x, const std::vector<int>& nu,
                                   const std::vector<int>& labels, const ExtractorParams& p,
                                   double loss_scale = 1.0) {
  using namespace extractor_detail;
  auto f = forward(x, nu, p);
  const std::size_t N = x.size(), H = p.dims.hidden, P = p.dims.position;
  LossGrad out;
  out.loss = bce_loss(f.probs, labels);
  out.grad = zero_params(p.dims);
  auto& g = out.grad;
  const auto& st = f.states;

  // dL/dscore_i through the loss term alone. Clamped probabilities are flat.
  Vec dscore_direct(N);
  for (std::size_t i = 0; i < N; ++i) {
    double q = f.probs[i];
    bool clamped = q < kLossEpsilon || q > 1.0 - kLossEpsilon;
    dscore_direct[i] = clamped ? 0.0 : loss_scale * (q - labels[i]) / static_cast<double>(N);
  }

  Vec sal(H, 0.0);
  matvec_acc(p[kWs], f.d.data(), sal.data());

  std::vector<Vec> dh(N, Vec(H, 0.0));
  Vec dd(H, 0.0);
  Vec gsum(H, 0.0);  // dL/dsum_{i+1} while visiting i
  Vec ts(H), nov(H), dts(H);
  for (std::size_t step = 0; step < N; ++step) {
    const std::size_t i = N - 1 - step;
    const Vec& h = st.h[i];
    const double pi = f.probs[i];
    // sum_{i+1} = sum_i + p_i h_i feeds back into this sentence's score.
    double ds = dscore_direct[i] + dot(gsum.data(), h.data(), H) * pi * (1.0 - pi);

    for (std::size_t k = 0; k < H; ++k) ts[k] = std::tanh(f.sums[i][k]);
    std::fill(nov.begin(), nov.end(), 0.0);
    matvec_acc(p[kWnov], ts.data(), nov.data());

    for (std::size_t k = 0; k < H; ++k)
      dh[i][k] += gsum[k] * pi + ds * (p[kWc].data[k] + sal[k] - nov[k]);
    for (std::size_t k = 0; k < H; ++k) g[kWc].data[k] += ds * h[k];
    for (std::size_t r = 0; r < H; ++r) {
      const double a = ds * h[r];
      double* gs = g[kWs].row(r);
      double* gn = g[kWnov].row(r);
      for (std::size_t c = 0; c < H; ++c) {
        gs[c] += a * f.d[c];
        gn[c] -= a * ts[c];
      }
    }
    std::fill(dts.begin(), dts.end(), 0.0);
    matTvec_acc(p[kWs], h.data(), dts.data());
    for (std::size_t k = 0; k < H; ++k) dd[k] += ds * dts[k];
    std::fill(dts.begin(), dts.end(), 0.0);
    matTvec_acc(p[kWnov], h.data(), dts.data());
    for (std::size_t k = 0; k < H; ++k) gsum[k] += -ds * dts[k] * (1.0 - ts[k] * ts[k]);

    const std::size_t a = st.p_abs_idx[i], r = st.p_rel_idx[i];
    for (std::size_t k = 0; k < P; ++k) {
      g[kWap].data[k] += ds * p[kPabs].at(a, k);
      g[kPabs].at(a, k) += ds * p[kWap].data[k];
      g[kWrp].data[k] += ds * p[kPrel].at(r, k);
      g[kPrel].at(r, k) += ds * p[kWrp].data[k];
    }
    g[kWnum].data[0] += ds * st.nu[i];
    g[kBcls].data[0] += ds;
  }

  // d = tanh(W_d mean_c + b_d)
  Vec dpre(H), dmean(2 * H, 0.0);
  for (std::size_t k = 0; k < H; ++k) dpre[k] = dd[k] * (1.0 - f.d[k] * f.d[k]);
  outer_acc(g[kWd], dpre.data(), f.mean_c.data());
  add_to(g[kBd].data.data(), dpre.data(), H);
  matTvec_acc(p[kWd], dpre.data(), dmean.data());

  // h_i = tanh(W_h [h_f; h_b] + b_h)
  std::vector<Vec> dhf(N, Vec(H)), dhb(N, Vec(H));
  Vec c(2 * H), du(H), dc(2 * H);
  for (std::size_t i = 0; i < N; ++i) {
    std::copy(st.h_f[i].begin(), st.h_f[i].end(), c.begin());
    std::copy(st.h_b[i].begin(), st.h_b[i].end(), c.begin() + static_cast<long>(H));
    for (std::size_t k = 0; k < H; ++k) du[k] = dh[i][k] * (1.0 - st.h[i][k] * st.h[i][k]);
    outer_acc(g[kWh], du.data(), c.data());
    add_to(g[kBh].data.data(), du.data(), H);
    for (std::size_t k = 0; k < 2 * H; ++k) dc[k] = dmean[k] / static_cast<double>(N);
    matTvec_acc(p[kWh], du.data(), dc.data());
    std::copy(dc.begin(), dc.begin() + static_cast<long>(H), dhf[i].begin());
    std::copy(dc.begin() + static_cast<long>(H), dc.end(), dhb[i].begin());
  }
  backprop_gru(p, g, kFwd, x, f.fwd, dhf, false);
  backprop_gru(p, g, kBwd, x, f.bwd, dhb, true);
  return out;
}

inline ExtractorParams gradients(const std::vector<SentenceVec>& x, const std::vector<int>& nu,
                                 const std::vector<int>& labels, const ExtractorParams& p,
                                 double loss_scale = 1.0) {
  return loss_and_gradients(x, nu, labels, p, loss_scale).grad;
}

}  // namespace ectsum
