#pragma once

// Extractiveness statistics (fragment coverage, density, compression) and the
// salient-unigram position distribution.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ectsum/corpus.hpp"
#include "ectsum/stopwords.hpp"

namespace ectsum {

struct Fragment {
  std::size_t doc_start = 0;
  std::size_t summary_start = 0;
  std::size_t length = 0;
  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct FragmentSet {
  std::vector<Fragment> fragments;
  std::size_t summary_len = 0;
  std::size_t doc_len = 0;
};

// Greedy left-to-right extraction: at summary position i take the longest
// run summary[i..] shared with any document position (smallest doc start
// on ties), emit it and jump past it; unmatched tokens advance by one.
inline FragmentSet extract_fragments(const std::vector<std::string>& doc,
                                     const std::vector<std::string>& summary) {
  FragmentSet f;
  f.summary_len = summary.size();
  f.doc_len = doc.size();
  std::unordered_map<std::string_view, std::vector<std::size_t>> positions;
  for (std::size_t j = 0; j < doc.size(); ++j) positions[doc[j]].push_back(j);

  std::size_t i = 0;
  while (i < summary.size()) {
    std::size_t best_len = 0, best_start = 0;
    if (auto it = positions.find(summary[i]); it != positions.end()) {
      for (std::size_t j : it->second) {
        std::size_t k = 0;
        while (i + k < summary.size() && j + k < doc.size() && summary[i + k] == doc[j + k]) ++k;
        if (k > best_len) {
          best_len = k;
          best_start = j;
        }
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    f.fragments.push_back({best_start, i, best_len});
    i += best_len;
  }
  return f;
}

// Fraction of summary tokens inside a fragment. Undefined for empty summaries.
inline std::optional<double> coverage(const FragmentSet& f) {
  if (f.summary_len == 0) return std::nullopt;
  double total = 0;
  for (const auto& fr : f.fragments) total += static_cast<double>(fr.length);
  return total / static_cast<double>(f.summary_len);
}

// Mean squared fragment length per summary token.
inline std::optional<double> density(const FragmentSet& f) {
  if (f.summary_len == 0) return std::nullopt;
  double total = 0;
  for (const auto& fr : f.fragments) {
    double len = static_cast<double>(fr.length);
    total += len * len;
  }
  return total / static_cast<double>(f.summary_len);
}

struct TokenCounts {
  std::size_t doc_tokens = 0;
  std::size_t summary_tokens = 0;
};

struct CompressionResult {
  double value = 0.0;      // mean of per-pair doc/summary token ratios
  std::size_t used = 0;
  std::size_t excluded = 0;  // pairs with zero-token summaries
};

inline CompressionResult compression(const std::vector<TokenCounts>& pairs) {
  CompressionResult r;
  double sum = 0;
  for (const auto& p : pairs) {
    if (p.summary_tokens == 0) {
      ++r.excluded;
      continue;
    }
    sum += static_cast<double>(p.doc_tokens) / static_cast<double>(p.summary_tokens);
    ++r.used;
  }
  if (r.used > 0) r.value = sum / static_cast<double>(r.used);
  return r;
}

using QuartileShares = std::array<double, 4>;

// Segment k covers [bounds[k], bounds[k+1]); floor-sized, remainder tokens go
// to the earliest segments.
inline std::array<std::size_t, 5> segment_bounds(std::size_t n) {
  std::array<std::size_t, 5> b{};
  std::size_t base = n / 4, extra = n % 4;
  for (std::size_t k = 0; k < 4; ++k) b[k + 1] = b[k] + base + (k < extra ? 1 : 0);
  return b;
}

// Occurrences of salient summary unigram types (stopwords excluded) in each
// document quarter, normalized by total occurrences. Undefined when no
// salient type occurs in the document.
inline std::optional<QuartileShares> salient_unigram_distribution(
    const std::vector<std::string>& doc, const std::vector<std::string>& summary) {
  std::unordered_set<std::string_view> salient;
  for (const auto& t : summary)
    if (!is_stopword(t)) salient.insert(t);
  auto bounds = segment_bounds(doc.size());
  std::array<double, 4> counts{};
  double total = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t j = bounds[k]; j < bounds[k + 1]; ++j) {
      if (salient.contains(doc[j])) {
        counts[k] += 1;
        total += 1;
      }
    }
  }
  if (total == 0) return std::nullopt;
  QuartileShares s{};
  for (std::size_t k = 0; k < 4; ++k) s[k] = counts[k] / total;
  return s;
}

struct PairStats {
  std::string pair_id;
  std::size_t doc_tokens = 0;
  std::size_t summary_tokens = 0;
  std::optional<double> coverage;
  std::optional<double> density;
  std::optional<QuartileShares> quartiles;
};

struct CorpusStats {
  std::size_t n_docs = 0;
  double coverage = 0;
  double density = 0;
  double compression = 0;
  double mean_doc_tokens = 0;
  double mean_summary_tokens = 0;
  QuartileShares quartile_shares{};
  std::size_t undefined_fragment_pairs = 0;  // empty summaries
  std::size_t undefined_quartile_pairs = 0;
  std::vector<PairStats> per_pair;
};

inline PairStats pair_stats(const DocumentSummaryPair& p) {
  PairStats s;
  s.pair_id = p.pair_id;
  auto doc = flatten_tokens(p.transcript.sentences);
  auto sum = flatten_tokens(p.summary.bullets);
  s.doc_tokens = doc.size();
  s.summary_tokens = sum.size();
  auto f = extract_fragments(doc, sum);
  s.coverage = coverage(f);
  s.density = density(f);
  if (!doc.empty()) s.quartiles = salient_unigram_distribution(doc, sum);
  return s;
}

// Reduction over per-pair statistics. Means skip pairs where a statistic is
// undefined; the skipped counts are reported.
inline CorpusStats aggregate_stats(std::vector<PairStats> per_pair) {
  CorpusStats c;
  c.n_docs = per_pair.size();
  std::size_t n_frag = 0, n_quart = 0;
  std::vector<TokenCounts> counts;
  for (const auto& s : per_pair) {
    c.mean_doc_tokens += static_cast<double>(s.doc_tokens);
    c.mean_summary_tokens += static_cast<double>(s.summary_tokens);
    counts.push_back({s.doc_tokens, s.summary_tokens});
    if (s.coverage && s.density) {
      c.coverage += *s.coverage;
      c.density += *s.density;
      ++n_frag;
    } else {
      ++c.undefined_fragment_pairs;
    }
    if (s.quartiles) {
      for (std::size_t k = 0; k < 4; ++k) c.quartile_shares[k] += (*s.quartiles)[k];
      ++n_quart;
    } else {
      ++c.undefined_quartile_pairs;
    }
  }
  if (c.n_docs > 0) {
    c.mean_doc_tokens /= static_cast<double>(c.n_docs);
    c.mean_summary_tokens /= static_cast<double>(c.n_docs);
  }
  if (n_frag > 0) {
    c.coverage /= static_cast<double>(n_frag);
    c.density /= static_cast<double>(n_frag);
  }
  if (n_quart > 0)
    for (auto& q : c.quartile_shares) q /= static_cast<double>(n_quart);
  c.compression = compression(counts).value;
  c.per_pair = std::move(per_pair);
  return c;
}

inline CorpusStats corpus_stats(const std::vector<DocumentSummaryPair>& pairs) {
  std::vector<PairStats> per;
  per.reserve(pairs.size());
  for (const auto& p : pairs) per.push_back(pair_stats(p));
  return aggregate_stats(std::move(per));
}

}  // namespace ectsum
