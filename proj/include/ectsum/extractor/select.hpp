#pragma once

// Budgeted greedy selection shared by the extractor and the baselines.

#include <algorithm>
#include <numeric>
#include <vector>

#include "ectsum/error.hpp"
#include "ectsum/text.hpp"

namespace ectsum {

inline constexpr std::size_t kDefaultWordBudget = 50;

// Visits `order` and keeps sentences while the running word count is below
// the budget; at least one sentence is kept. Returned in document order.
inline std::vector<std::size_t> take_within_budget(const std::vector<std::size_t>& order,
                                                   const std::vector<Sentence>& sentences,
                                                   std::size_t word_budget) {
  std::vector<std::size_t> chosen;
  std::size_t words = 0;
  for (std::size_t i : order) {
    if (!chosen.empty() && words >= word_budget) break;
    chosen.push_back(i);
    words += sentences.at(i).word_count();
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Highest score first, smaller index on ties.
inline std::vector<std::size_t> rank_by_score(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

inline std::vector<std::size_t> select(const std::vector<double>& probs,
                                       const std::vector<Sentence>& sentences,
                                       std::size_t word_budget = kDefaultWordBudget) {
  if (probs.size() != sentences.size())
    throw ShapeError("scores and sentences differ in length");
  if (probs.empty()) return {};
  return take_within_budget(rank_by_score(probs), sentences, word_budget);
}

}  // namespace ectsum
