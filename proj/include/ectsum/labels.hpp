#pragma once

// Oracle extractive labels and paraphrase training pairs. Each reference
// bullet is aligned to every document sentence whose numerals contain all
// of the bullet's numerals; bullets without such a match fall back to the
// most similar document sentence.

#include <algorithm>
#include <string>
#include <vector>

#include "ectsum/corpus.hpp"
#include "ectsum/encoder.hpp"
#include "ectsum/masking.hpp"
#include "ectsum/numeral.hpp"

namespace ectsum {

enum class MatchKind { kNumeric, kSimilarity };

inline std::string_view to_string(MatchKind k) {
  return k == MatchKind::kNumeric ? "numeric" : "similarity";
}

inline MatchKind match_kind_from_string(std::string_view s) {
  if (s == "numeric") return MatchKind::kNumeric;
  if (s == "similarity") return MatchKind::kSimilarity;
  throw FormatError("unknown match kind '" + std::string(s) + "'");
}

struct Alignment {
  std::size_t target_index = 0;
  std::vector<std::size_t> doc_indices;
  MatchKind kind = MatchKind::kNumeric;
  friend bool operator==(const Alignment&, const Alignment&) = default;
};

struct LabelSet {
  std::vector<int> labels;  // y_i per document sentence
  std::vector<Alignment> alignments;

  std::size_t positives() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  }
};

// Sorted canonical keys, i.e. a multiset.
inline std::vector<std::string> key_multiset(std::string_view text) {
  auto keys = numeral_keys(text);
  std::sort(keys.begin(), keys.end());
  return keys;
}

inline bool multiset_contains(const std::vector<std::string>& super,
                              const std::vector<std::string>& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline std::vector<std::size_t> numeric_match(const std::vector<std::string>& target_keys,
                                              const std::vector<std::vector<std::string>>& doc_keys) {
  std::vector<std::size_t> out;
  if (target_keys.empty()) return out;
  for (std::size_t i = 0; i < doc_keys.size(); ++i)
    if (multiset_contains(doc_keys[i], target_keys)) out.push_back(i);
  return out;
}

inline std::vector<std::size_t> numeric_match(const Sentence& target,
                                              const std::vector<Sentence>& doc) {
  std::vector<std::vector<std::string>> doc_keys;
  doc_keys.reserve(doc.size());
  for (const auto& s : doc) doc_keys.push_back(key_multiset(s.text));
  return numeric_match(key_multiset(target.text), doc_keys);
}

// Argmax cosine; zero document vectors score -1, ties go to the smaller index.
inline std::size_t similarity_fallback(const SentenceVec& target,
                                       const std::vector<SentenceVec>& doc_vecs) {
  std::size_t best = doc_vecs.size();
  double best_score = -2.0;
  bool any_nonzero = false;
  for (std::size_t i = 0; i < doc_vecs.size(); ++i) {
    double score = doc_vecs[i].is_zero() ? -1.0 : cosine(target, doc_vecs[i]);
    any_nonzero = any_nonzero || !doc_vecs[i].is_zero();
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  if (!any_nonzero) throw FallbackFailed("every document sentence embeds to the zero vector");
  return best;
}

inline std::vector<SentenceVec> embed_document(const DocumentSummaryPair& pair,
                                               const EmbeddingProvider& enc) {
  std::vector<SentenceVec> out;
  out.reserve(pair.transcript.sentences.size());
  for (const auto& s : pair.transcript.sentences)
    out.push_back(enc.embed(doc_sentence_id(pair.pair_id, s.index), s));
  return out;
}

inline LabelSet build_labels(const DocumentSummaryPair& pair, const EmbeddingProvider& enc) {
  const auto& doc = pair.transcript.sentences;
  LabelSet ls;
  ls.labels.assign(doc.size(), 0);
  std::vector<std::vector<std::string>> doc_keys;
  for (const auto& s : doc) doc_keys.push_back(key_multiset(s.text));
  std::vector<SentenceVec> doc_vecs;  // embedded lazily, only if a fallback is needed

  for (const auto& bullet : pair.summary.bullets) {
    Alignment a;
    a.target_index = bullet.index;
    a.doc_indices = numeric_match(key_multiset(bullet.text), doc_keys);
    if (a.doc_indices.empty()) {
      if (doc_vecs.empty()) doc_vecs = embed_document(pair, enc);
      auto target = enc.embed(summary_sentence_id(pair.pair_id, bullet.index), bullet);
      a.doc_indices.push_back(similarity_fallback(target, doc_vecs));
      a.kind = MatchKind::kSimilarity;
    }
    for (auto i : a.doc_indices) ls.labels[i] = 1;
    ls.alignments.push_back(std::move(a));
  }
  return ls;
}

struct ParaphrasePair {
  std::string pair_id;  // "<document pair id>:t<target>:d<doc>"
  MaskedSentence source;
  MaskedSentence target;
  MatchKind kind = MatchKind::kNumeric;
};

struct ParaphraseBuild {
  std::vector<ParaphrasePair> pairs;
  std::vector<std::string> warnings;
};

// One masked (document sentence -> bullet) pair per alignment edge. Target
// numerals reuse the source placeholder with the same canonical key, so a
// rewriter learns to copy placeholders rather than values.
inline ParaphraseBuild build_paraphrase_pairs(const DocumentSummaryPair& pair,
                                              const LabelSet& labels) {
  ParaphraseBuild out;
  for (const auto& a : labels.alignments) {
    const auto& bullet = pair.summary.bullets.at(a.target_index);
    for (auto d : a.doc_indices) {
      ParaphrasePair pp;
      pp.pair_id = pair.pair_id + ":t" + std::to_string(a.target_index) + ":d" + std::to_string(d);
      pp.source = mask_numerals(pair.transcript.sentences.at(d));
      pp.target = mask_aligned(bullet.text, pp.source);
      pp.kind = a.kind;
      if (a.kind == MatchKind::kNumeric) {
        bool ok = true;
        for (const auto& p : pp.target.placeholders) {
          const Placeholder* src = pp.source.find(p.name);
          ok = ok && src != nullptr && src->key == p.key;
        }
        if (!ok) {
          out.warnings.push_back(pp.pair_id + ": target placeholders not contained in source");
          continue;
        }
      }
      out.pairs.push_back(std::move(pp));
    }
  }
  return out;
}

// ---- records ----

inline Json to_json(const LabelSet& ls, std::string_view pair_id) {
  Json j;
  j["pair_id"] = pair_id;
  std::string bits;
  for (int y : ls.labels) bits += y ? '1' : '0';
  j["labels"] = bits;
  Json arr = Json::array();
  for (const auto& a : ls.alignments) {
    Json aj;
    aj["target"] = a.target_index;
    aj["docs"] = a.doc_indices;
    aj["kind"] = to_string(a.kind);
    arr.push_back(std::move(aj));
  }
  j["alignments"] = std::move(arr);
  return j;
}

inline LabelSet labels_from_json(const Json& j) {
  LabelSet ls;
  for (char c : require<std::string>(j, "labels")) {
    if (c != '0' && c != '1') throw FormatError("label bitvector must contain only 0/1");
    ls.labels.push_back(c == '1');
  }
  for (const auto& aj : require<Json>(j, "alignments")) {
    Alignment a;
    a.target_index = require<std::size_t>(aj, "target");
    a.doc_indices = require<std::vector<std::size_t>>(aj, "docs");
    a.kind = match_kind_from_string(require<std::string>(aj, "kind"));
    ls.alignments.push_back(std::move(a));
  }
  return ls;
}

inline Json placeholders_to_json(const MaskedSentence& m) {
  Json obj = Json::object();
  for (const auto& p : m.placeholders) obj[p.name] = p.raw;
  return obj;
}

inline Json to_json(const ParaphrasePair& p) {
  Json j;
  j["pair_id"] = p.pair_id;
  j["masked_source"] = p.source.masked_text;
  j["masked_target"] = p.target.masked_text;
  j["source_placeholders"] = placeholders_to_json(p.source);
  j["target_placeholders"] = placeholders_to_json(p.target);
  j["kind"] = to_string(p.kind);
  return j;
}

}  // namespace ectsum
