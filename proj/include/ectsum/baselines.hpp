#pragma once

// Reference summarizers: LexRank over encoder cosine similarities, the lead
// baseline, and the label oracle.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ectsum/encoder.hpp"
#include "ectsum/error.hpp"
#include "ectsum/extractor/select.hpp"
#include "ectsum/labels.hpp"

namespace ectsum {

struct LexRankConfig {
  double threshold = 0.1;
  double damping = 0.85;
  double tolerance = 1e-10;  // L-infinity change between iterations
  std::size_t max_iterations = 200;

  Json to_json() const {
    Json j;
    j["threshold"] = threshold;
    j["damping"] = damping;
    j["tolerance"] = tolerance;
    j["max_iterations"] = max_iterations;
    return j;
  }
};

// Row-stochastic transition matrix. Edges carry cosine similarity when it
// exceeds the threshold; rows with no edge become uniform.
struct SimilarityGraph {
  std::size_t n = 0;
  std::vector<double> transition;  // row-major n x n

  double at(std::size_t i, std::size_t j) const { return transition[i * n + j]; }
};

inline SimilarityGraph build_similarity_graph(const std::vector<SentenceVec>& vecs,
                                              double threshold = 0.1) {
  SimilarityGraph g;
  g.n = vecs.size();
  g.transition.assign(g.n * g.n, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < g.n; ++j) {
      double c = cosine(vecs[i], vecs[j]);
      if (c > threshold) {
        g.transition[i * g.n + j] = c;
        row += c;
      }
    }
    for (std::size_t j = 0; j < g.n; ++j)
      g.transition[i * g.n + j] = row > 0 ? g.transition[i * g.n + j] / row : 1.0 / static_cast<double>(g.n);
  }
  return g;
}

// Stationary distribution of the damped walk
//   p = (1 - d)/N + d * T^T p
// by power iteration from the uniform vector.
inline std::vector<double> lexrank_scores(const SimilarityGraph& g, const LexRankConfig& cfg = {}) {
  const std::size_t n = g.n;
  if (n == 0) return {};
  const double base = (1.0 - cfg.damping) / static_cast<double>(n);
  std::vector<double> p(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    std::fill(next.begin(), next.end(), base);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = cfg.damping * p[i];
      for (std::size_t j = 0; j < n; ++j) next[j] += w * g.at(i, j);
    }
    double delta = 0;
    for (std::size_t j = 0; j < n; ++j) delta = std::max(delta, std::abs(next[j] - p[j]));
    std::swap(p, next);
    if (delta < cfg.tolerance) break;
  }
  return p;
}

inline std::vector<std::size_t> lexrank(const DocumentSummaryPair& pair, const EmbeddingProvider& enc,
                                        std::size_t word_budget = kDefaultWordBudget,
                                        const LexRankConfig& cfg = {}) {
  const auto& doc = pair.transcript.sentences;
  if (doc.empty()) throw ShapeError("cannot summarize an empty document");
  if (doc.size() == 1) return {0};
  auto scores = lexrank_scores(build_similarity_graph(embed_document(pair, enc), cfg.threshold), cfg);
  return take_within_budget(rank_by_score(scores), doc, word_budget);
}

inline std::vector<std::size_t> lead(const std::vector<Sentence>& doc,
                                     std::size_t word_budget = kDefaultWordBudget) {
  if (doc.empty()) throw ShapeError("cannot summarize an empty document");
  std::vector<std::size_t> order(doc.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return take_within_budget(order, doc, word_budget);
}

inline std::vector<std::size_t> ext_oracle(const LabelSet& labels) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.labels.size(); ++i)
    if (labels.labels[i]) out.push_back(i);
  return out;
}

inline std::vector<std::size_t> ext_oracle(const DocumentSummaryPair& pair, const EmbeddingProvider& enc) {
  return ext_oracle(build_labels(pair, enc));
}

}  // namespace ectsum
