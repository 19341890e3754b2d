#pragma once

// ROUGE-1/2/L and numeral precision, plus report assembly. ROUGE runs on
// the library tokenizer without stemming or stopword removal; ROUGE-L is
// summary-level (one LCS over the whole token sequence).

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ectsum/corpus.hpp"
#include "ectsum/numeral.hpp"
#include "ectsum/parallel.hpp"
#include "ectsum/records.hpp"
#include "ectsum/text.hpp"

namespace ectsum {

struct RougeScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

inline RougeScore make_rouge(double match, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = cand_total > 0 ? match / cand_total : 0.0;
  s.recall = ref_total > 0 ? match / ref_total : 0.0;
  double d = s.precision + s.recall;
  s.f1 = d > 0 ? 2 * s.precision * s.recall / d : 0.0;
  return s;
}

namespace metrics_detail {

inline std::string ngram_key(const std::vector<std::string>& t, std::size_t i, std::size_t n) {
  std::string k;
  for (std::size_t j = 0; j < n; ++j) {
    if (j) k += '\x1f';
    k += t[i + j];
  }
  return k;
}

inline std::unordered_map<std::string, std::size_t> ngram_counts(const std::vector<std::string>& t,
                                                                 std::size_t n) {
  std::unordered_map<std::string, std::size_t> c;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++c[ngram_key(t, i, n)];
  return c;
}

}  // namespace metrics_detail

// Clipped n-gram overlap. Undefined when the reference is empty.
inline std::optional<RougeScore> rouge_n(const std::vector<std::string>& candidate,
                                         const std::vector<std::string>& reference, std::size_t n) {
  if (n == 0) throw ConfigError("ROUGE-N order must be >= 1");
  if (reference.empty()) return std::nullopt;
  auto cc = metrics_detail::ngram_counts(candidate, n);
  auto rc = metrics_detail::ngram_counts(reference, n);
  std::size_t match = 0;
  for (const auto& [g, c] : cc)
    if (auto it = rc.find(g); it != rc.end()) match += std::min(c, it->second);
  auto total = [n](std::size_t len) { return len >= n ? len - n + 1 : 0; };
  return make_rouge(static_cast<double>(match), static_cast<double>(total(candidate.size())),
                    static_cast<double>(total(reference.size())));
}

inline std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::optional<RougeScore> rouge_l(const std::vector<std::string>& candidate,
                                         const std::vector<std::string>& reference) {
  if (reference.empty()) return std::nullopt;
  return make_rouge(static_cast<double>(lcs_length(candidate, reference)),
                    static_cast<double>(candidate.size()), static_cast<double>(reference.size()));
}

struct NumPrec {
  std::size_t consistent = 0;
  std::size_t total = 0;
  std::vector<std::string> flagged;  // raw numerals without a source match
  double value() const { return static_cast<double>(consistent) / static_cast<double>(total); }
};

// Fraction of summary numerals whose canonical key occurs in the source.
// Undefined when the summary has no numerals.
// `source_keys` must be sorted.
inline std::optional<NumPrec> num_prec(std::string_view summary,
                                       const std::vector<std::string>& source_keys) {
  auto nums = extract_numerals(summary);
  if (nums.empty()) return std::nullopt;
  const auto& keys = source_keys;
  NumPrec r;
  for (const auto& n : nums) {
    ++r.total;
    if (std::binary_search(keys.begin(), keys.end(), canonical_key(n)))
      ++r.consistent;
    else
      r.flagged.push_back(n.raw);
  }
  return r;
}

// Sorted numeral keys of a document, collected sentence by sentence.
inline std::vector<std::string> document_keys(const std::vector<Sentence>& sentences) {
  std::vector<std::string> keys;
  for (const auto& s : sentences) {
    auto k = numeral_keys(s.text);
    keys.insert(keys.end(), k.begin(), k.end());
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

inline std::optional<NumPrec> num_prec(std::string_view summary, std::string_view source) {
  auto keys = numeral_keys(source);
  std::sort(keys.begin(), keys.end());
  return num_prec(summary, keys);
}

// ---- report ----

struct Prediction {
  std::string pair_id;
  std::string summary_text;
};

struct DocScores {
  std::string pair_id;
  std::optional<RougeScore> r1, r2, rl;
  std::optional<NumPrec> num_prec;
};

struct MetricsReport {
  std::vector<DocScores> per_doc;
  std::size_t n_pairs = 0;
  std::size_t evaluated = 0;          // pairs with a prediction
  std::vector<std::string> missing;   // pairs without a prediction
  std::vector<std::string> unknown;   // predictions naming no pair
  std::size_t undefined_rouge = 0;    // empty references
  std::size_t no_numerals = 0;        // summaries without numerals
  std::optional<double> mean_r1, mean_r2, mean_rl, mean_num_prec;
};

inline Json rouge_config() {
  Json j;
  j["tokenizer"] = "ectsum-whitespace-lowercase";
  j["stemming"] = false;
  j["stopword_removal"] = false;
  j["rouge_l"] = "summary-level";
  j["statistic"] = "f1";
  j["num_prec"] = "canonical-key";
  return j;
}

inline DocScores score_document(const DocumentSummaryPair& pair, std::string_view summary_text) {
  DocScores d;
  d.pair_id = pair.pair_id;
  auto cand = tokenize(summary_text);
  auto ref = flatten_tokens(pair.summary.bullets);
  d.r1 = rouge_n(cand, ref, 1);
  d.r2 = rouge_n(cand, ref, 2);
  d.rl = rouge_l(cand, ref);
  d.num_prec = num_prec(summary_text, document_keys(pair.transcript.sentences));
  return d;
}

inline MetricsReport evaluate(const std::vector<Prediction>& predictions,
                              const std::vector<DocumentSummaryPair>& pairs,
                              std::size_t threads = 1) {
  MetricsReport rep;
  std::map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions)
    if (!by_id.emplace(p.pair_id, &p).second)
      throw FormatError("duplicate prediction for pair '" + p.pair_id + "'");
  std::vector<const DocumentSummaryPair*> sorted;
  for (const auto& p : pairs) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->pair_id < b->pair_id; });
  rep.n_pairs = sorted.size();

  std::vector<std::pair<const DocumentSummaryPair*, const Prediction*>> work;
  for (auto* p : sorted) {
    auto it = by_id.find(p->pair_id);
    if (it == by_id.end()) {
      rep.missing.push_back(p->pair_id);
      continue;
    }
    work.emplace_back(p, it->second);
    by_id.erase(it);
  }
  for (const auto& [id, _] : by_id) rep.unknown.push_back(id);

  rep.per_doc = parallel_map(work.size(), threads, [&](std::size_t i) {
    return score_document(*work[i].first, work[i].second->summary_text);
  });
  rep.evaluated = rep.per_doc.size();

  double s1 = 0, s2 = 0, sl = 0, snp = 0;
  std::size_t n_rouge = 0, n_np = 0;
  for (const auto& d : rep.per_doc) {
    if (d.r1 && d.r2 && d.rl) {
      s1 += d.r1->f1;
      s2 += d.r2->f1;
      sl += d.rl->f1;
      ++n_rouge;
    } else {
      ++rep.undefined_rouge;
    }
    if (d.num_prec) {
      snp += d.num_prec->value();
      ++n_np;
    } else {
      ++rep.no_numerals;
    }
  }
  if (n_rouge > 0) {
    rep.mean_r1 = s1 / static_cast<double>(n_rouge);
    rep.mean_r2 = s2 / static_cast<double>(n_rouge);
    rep.mean_rl = sl / static_cast<double>(n_rouge);
  }
  if (n_np > 0) rep.mean_num_prec = snp / static_cast<double>(n_np);
  return rep;
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json to_json(const std::optional<RougeScore>& s) {
  if (!s) return nullptr;
  Json j;
  j["p"] = s->precision;
  j["r"] = s->recall;
  j["f1"] = s->f1;
  return j;
}

inline Json to_json(const DocScores& d) {
  Json j;
  j["pair_id"] = d.pair_id;
  j["rouge1"] = to_json(d.r1);
  j["rouge2"] = to_json(d.r2);
  j["rougeL"] = to_json(d.rl);
  if (d.num_prec) {
    j["num_prec"] = d.num_prec->value();
    j["numerals"] = d.num_prec->total;
    j["consistent"] = d.num_prec->consistent;
    j["flagged"] = d.num_prec->flagged;
  } else {
    j["num_prec"] = nullptr;
  }
  return j;
}

inline Json summary_json(const MetricsReport& r) {
  Json j;
  j["summary"] = true;
  j["pairs"] = r.n_pairs;
  j["evaluated"] = r.evaluated;
  j["missing"] = r.missing;
  j["unknown_predictions"] = r.unknown;
  j["undefined_rouge"] = r.undefined_rouge;
  j["no_numerals"] = r.no_numerals;
  j["rouge1_f1"] = optional_json(r.mean_r1);
  j["rouge2_f1"] = optional_json(r.mean_r2);
  j["rougeL_f1"] = optional_json(r.mean_rl);
  j["num_prec"] = optional_json(r.mean_num_prec);
  return j;
}

inline std::string format_table(const MetricsReport& r) {
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string("     -");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%6.4f", *v);
    return std::string(buf);
  };
  auto f1 = [&](const std::optional<RougeScore>& s) {
    return num(s ? std::optional<double>(s->f1) : std::nullopt);
  };
  std::size_t width = 7;
  for (const auto& d : r.per_doc) width = std::max(width, d.pair_id.size());
  auto pad = [&](std::string s) {
    s.resize(width, ' ');
    return s;
  };
  std::string out = pad("pair_id") + "  ROUGE-1  ROUGE-2  ROUGE-L  Num-Prec\n";
  for (const auto& d : r.per_doc) {
    out += pad(d.pair_id) + "   " + f1(d.r1) + "   " + f1(d.r2) + "   " + f1(d.rl) + "    " +
           num(d.num_prec ? std::optional<double>(d.num_prec->value()) : std::nullopt) + "\n";
  }
  out += pad("mean") + "   " + num(r.mean_r1) + "   " + num(r.mean_r2) + "   " + num(r.mean_rl) +
         "    " + num(r.mean_num_prec) + "\n";
  out += "evaluated " + std::to_string(r.evaluated) + " of " + std::to_string(r.n_pairs) +
         " pairs; missing " + std::to_string(r.missing.size()) + "; undefined rouge " +
         std::to_string(r.undefined_rouge) + "; without numerals " + std::to_string(r.no_numerals) + "\n";
  return out;
}

}  // namespace ectsum
