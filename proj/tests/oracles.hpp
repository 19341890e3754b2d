#pragma once

// Independent reference computations used to check the library. They share
// no code with it beyond the parameter container.

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ectsum/encoder.hpp"
#include "ectsum/extractor.hpp"

namespace ectsum::oracle {

using Mat = Eigen::MatrixXd;
using Col = Eigen::VectorXd;

inline Mat mat(const Tensor& t) {
  Mat m(t.rows, t.cols);
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t c = 0; c < t.cols; ++c) m(r, c) = t.at(r, c);
  return m;
}

inline Col col(const Tensor& t) { return Eigen::Map<const Col>(t.data.data(), t.data.size()); }

inline Col sigmoid(const Col& a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }
inline Col tanh(const Col& a) { return a.array().tanh().matrix(); }

struct Gru {
  Mat Wz, Uz, Wr, Ur, Wn, Un;
  Col bz, br, bn;

  Gru(const ExtractorParams& p, std::size_t base)
      : Wz(mat(p[base + kWz])), Uz(mat(p[base + kUz])), Wr(mat(p[base + kWr])), Ur(mat(p[base + kUr])),
        Wn(mat(p[base + kWn])), Un(mat(p[base + kUn])), bz(col(p[base + kBz])), br(col(p[base + kBr])),
        bn(col(p[base + kBn])) {}

  Col step(const Col& x, const Col& h) const {
    Col z = sigmoid(Wz * x + Uz * h + bz);
    Col r = sigmoid(Wr * x + Ur * h + br);
    Col n = tanh(Wn * x + Un * r.cwiseProduct(h) + bn);
    return (Col::Ones(z.size()) - z).cwiseProduct(n) + z.cwiseProduct(h);
  }
};

// Sentence probabilities of the extractor, written directly from the model
// equations with dense linear algebra.
inline std::vector<double> forward_probs(const std::vector<SentenceVec>& xs, const std::vector<int>& nu,
                                         const ExtractorParams& p) {
  const std::size_t N = xs.size(), H = p.dims.hidden;
  std::vector<Col> x;
  for (const auto& v : xs) x.push_back(Eigen::Map<const Col>(v.values.data(), v.values.size()));
  Gru fwd(p, kFwd), bwd(p, kBwd);
  std::vector<Col> hf(N), hb(N);
  Col h = Col::Zero(H);
  for (std::size_t i = 0; i < N; ++i) hf[i] = h = fwd.step(x[i], h);
  h = Col::Zero(H);
  for (std::size_t i = N; i-- > 0;) hb[i] = h = bwd.step(x[i], h);

  Mat Wh = mat(p[kWh]), Wd = mat(p[kWd]), Ws = mat(p[kWs]), Wnov = mat(p[kWnov]);
  Mat Pabs = mat(p[kPabs]), Prel = mat(p[kPrel]);
  Col bh = col(p[kBh]), bd = col(p[kBd]), wc = col(p[kWc]), wap = col(p[kWap]), wrp = col(p[kWrp]);
  double wnum = p[kWnum].data[0], bcls = p[kBcls].data[0];

  std::vector<Col> hs(N);
  Col mean = Col::Zero(2 * H);
  for (std::size_t i = 0; i < N; ++i) {
    Col c(2 * H);
    c << hf[i], hb[i];
    hs[i] = tanh(Wh * c + bh);
    mean += c;
  }
  mean /= static_cast<double>(N);
  Col d = tanh(Wd * mean + bd);

  std::vector<double> probs(N);
  Col sum = Col::Zero(H);
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t a = std::min<std::size_t>(i, p.dims.max_pos - 1);
    std::size_t r = std::min<std::size_t>(9, (10 * i) / N);
    double s = wc.dot(hs[i]) + hs[i].dot(Ws * d) - hs[i].dot(Wnov * tanh(sum)) +
               Pabs.row(static_cast<Eigen::Index>(a)).dot(wap) +
               Prel.row(static_cast<Eigen::Index>(r)).dot(wrp) + wnum * nu[i] + bcls;
    probs[i] = 1.0 / (1.0 + std::exp(-s));
    sum += probs[i] * hs[i];
  }
  return probs;
}

inline double bce(const std::vector<double>& probs, const std::vector<int>& y) {
  double s = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) s += y[i] ? std::log(probs[i]) : std::log(1 - probs[i]);
  return -s / static_cast<double>(probs.size());
}

struct GradCheck {
  double max_rel_error = 0;
  std::string worst;
  std::size_t checked = 0;
};

// Central differences over every parameter, compared against `analytic`.
// Relative error |a - n| / max(|a|, |n|, floor).
inline GradCheck finite_difference_check(const std::vector<SentenceVec>& x, const std::vector<int>& nu,
                                         const std::vector<int>& y, const ExtractorParams& p,
                                         const ExtractorParams& analytic, double step = 1e-5,
                                         double floor = 1e-7) {
  GradCheck out;
  ExtractorParams q = p;
  for (std::size_t t = 0; t < q.tensors.size(); ++t) {
    for (std::size_t k = 0; k < q.tensors[t].data.size(); ++k) {
      double& w = q.tensors[t].data[k];
      const double w0 = w;
      w = w0 + step;
      double up = oracle::bce(forward_probs(x, nu, q), y);
      w = w0 - step;
      double down = oracle::bce(forward_probs(x, nu, q), y);
      w = w0;
      double numeric = (up - down) / (2 * step);
      double a = analytic.tensors[t].data[k];
      double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      ++out.checked;
      if (rel > out.max_rel_error) {
        out.max_rel_error = rel;
        out.worst = q.tensors[t].name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return out;
}

// Stationary vector from (I - d T^T) p = (1 - d)/N, solved densely.
inline std::vector<double> lexrank_dense(const std::vector<double>& transition, std::size_t n, double damping) {
  Mat T(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) T(i, j) = transition[i * n + j];
  Mat A = Mat::Identity(n, n) - damping * T.transpose();
  Col b = Col::Constant(n, (1.0 - damping) / static_cast<double>(n));
  Col p = A.fullPivLu().solve(b);
  return {p.data(), p.data() + n};
}

// ---- ROUGE ----

struct Prf {
  double p = 0, r = 0, f = 0;
};

inline Prf prf(double match, double cand, double ref) {
  Prf s;
  s.p = cand > 0 ? match / cand : 0;
  s.r = ref > 0 ? match / ref : 0;
  s.f = s.p + s.r > 0 ? 2 * s.p * s.r / (s.p + s.r) : 0;
  return s;
}

inline std::optional<Prf> rouge_n(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                                  std::size_t n) {
  if (ref.empty()) return std::nullopt;
  std::map<std::vector<std::string>, int> cc, rc;
  for (std::size_t i = 0; i + n <= cand.size(); ++i) ++cc[{cand.begin() + i, cand.begin() + i + n}];
  for (std::size_t i = 0; i + n <= ref.size(); ++i) ++rc[{ref.begin() + i, ref.begin() + i + n}];
  double match = 0, ct = 0, rt = 0;
  for (auto& [g, c] : cc) {
    ct += c;
    auto it = rc.find(g);
    if (it != rc.end()) match += std::min(c, it->second);
  }
  for (auto& [g, c] : rc) rt += c;
  return prf(match, ct, rt);
}

inline bool is_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& seq) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < seq.size() && j < sub.size(); ++i)
    if (seq[i] == sub[j]) ++j;
  return j == sub.size();
}

// Longest common subsequence by enumerating every subsequence of the
// shorter list.
inline std::size_t lcs_exhaustive(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& l = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::uint64_t masks = std::uint64_t{1} << s.size();
  std::vector<std::string> sub;
  for (std::uint64_t m = 0; m < masks; ++m) {
    std::size_t bits = static_cast<std::size_t>(__builtin_popcountll(m));
    if (bits <= best) continue;
    sub.clear();
    for (std::size_t i = 0; i < s.size(); ++i)
      if (m >> i & 1) sub.push_back(s[i]);
    if (is_subsequence(sub, l)) best = bits;
  }
  return best;
}

inline std::optional<Prf> rouge_l(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
  if (ref.empty()) return std::nullopt;
  return prf(static_cast<double>(lcs_exhaustive(cand, ref)), static_cast<double>(cand.size()),
             static_cast<double>(ref.size()));
}

}  // namespace ectsum::oracle
