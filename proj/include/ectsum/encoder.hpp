#pragma once

// Sentence embedding providers. LexicalEncoder is a hashed tf-idf model
// fitted in-process; PrecomputedEmbeddings serves vectors produced by an
// external encoder, keyed by sentence id.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ectsum/binary_io.hpp"
#include "ectsum/error.hpp"
#include "ectsum/records.hpp"
#include "ectsum/stopwords.hpp"
#include "ectsum/text.hpp"

namespace ectsum {

struct SentenceVec {
  std::vector<double> values;
  double norm = 0.0;

  SentenceVec() = default;
  explicit SentenceVec(std::vector<double> v) : values(std::move(v)) {
    double s = 0;
    for (double x : values) s += x * x;
    norm = std::sqrt(s);
  }
  std::size_t dim() const { return values.size(); }
  bool is_zero() const { return norm == 0.0; }
};

// Cosine similarity; 0 when either vector is zero.
inline double cosine(const SentenceVec& a, const SentenceVec& b) {
  if (a.dim() != b.dim()) throw ShapeError("cosine of vectors with different dimensions");
  if (a.is_zero() || b.is_zero()) return 0.0;
  double dot = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values[i] * b.values[i];
  return dot / (a.norm * b.norm);
}

// Sentence ids used to address external embeddings.
inline std::string doc_sentence_id(std::string_view pair_id, std::size_t index) {
  return std::string(pair_id) + "#d" + std::to_string(index);
}
inline std::string summary_sentence_id(std::string_view pair_id, std::size_t index) {
  return std::string(pair_id) + "#s" + std::to_string(index);
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  virtual SentenceVec embed(std::string_view sentence_id, const Sentence& sentence) const = 0;
  virtual Json describe() const = 0;
};

// ---- hashed tf-idf ----

inline constexpr std::string_view kLexicalMagic = "ECTLEX01";

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct LexicalModel {
  std::size_t buckets = 0;     // H
  std::size_t dim = 0;         // D; equals buckets when there is no projection
  std::size_t doc_count = 0;   // N
  std::vector<double> idf;     // per bucket, ln(1 + N / (1 + df))

  std::size_t bucket(std::string_view token) const { return fnv1a64(token) % buckets; }

  bool projected() const { return dim != buckets; }

  // Count-sketch projection H -> D: one signed slot per bucket.
  std::size_t slot(std::size_t b) const {
    return projected() ? static_cast<std::size_t>(mix64(b) % dim) : b;
  }
  double sign(std::size_t b) const {
    return projected() && (mix64(b ^ 0x5bd1e995ULL) >> 63) ? -1.0 : 1.0;
  }

  std::string serialize() const {
    ByteWriter w;
    w.raw(kLexicalMagic);
    w.u64(buckets);
    w.u64(dim);
    w.u64(doc_count);
    for (double v : idf) w.f64(v);
    return w.bytes();
  }

  static LexicalModel deserialize(std::string_view bytes) {
    ByteReader r(bytes);
    if (r.raw(kLexicalMagic.size()) != kLexicalMagic) throw FormatError("not a lexical model");
    LexicalModel m;
    m.buckets = r.u64();
    m.dim = r.u64();
    m.doc_count = r.u64();
    if (m.buckets < 64 || m.dim == 0 || m.buckets > (1u << 26))
      throw FormatError("lexical model has invalid sizes");
    m.idf.resize(m.buckets);
    for (auto& v : m.idf) v = r.f64();
    if (!r.done()) throw FormatError("trailing bytes in lexical model");
    return m;
  }
};

// Fits idf over `documents` (each a token list; stopwords ignored).
// projection_dim 0 keeps the full H-dimensional space.
inline LexicalModel fit_lexical(const std::vector<std::vector<std::string>>& documents,
                                std::size_t buckets, std::size_t projection_dim = 0) {
  if (buckets < 64) throw ConfigError("hash bucket count must be >= 64");
  if (documents.empty()) throw ConfigError("cannot fit lexical model on an empty corpus");
  LexicalModel m;
  m.buckets = buckets;
  m.dim = projection_dim == 0 ? buckets : projection_dim;
  m.doc_count = documents.size();
  std::vector<std::size_t> df(buckets, 0);
  std::vector<std::size_t> last_seen(buckets, SIZE_MAX);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& tok : documents[d]) {
      if (is_stopword(tok)) continue;
      std::size_t b = m.bucket(tok);
      if (last_seen[b] != d) {
        last_seen[b] = d;
        ++df[b];
      }
    }
  }
  const double n = static_cast<double>(m.doc_count);
  m.idf.resize(buckets);
  for (std::size_t b = 0; b < buckets; ++b)
    m.idf[b] = std::log(1.0 + n / (1.0 + static_cast<double>(df[b])));
  return m;
}

// tf-idf bucket weights (projected when configured), L2-normalized unless zero.
inline SentenceVec encode(const std::vector<std::string>& tokens, const LexicalModel& m) {
  std::vector<double> v(m.dim, 0.0);
  for (const auto& tok : tokens) {
    if (is_stopword(tok)) continue;
    std::size_t b = m.bucket(tok);
    v[m.slot(b)] += m.sign(b) * m.idf[b];
  }
  double s = 0;
  for (double x : v) s += x * x;
  if (s > 0) {
    double inv = 1.0 / std::sqrt(s);
    for (auto& x : v) x *= inv;
  }
  return SentenceVec(std::move(v));
}

inline SentenceVec encode(const Sentence& s, const LexicalModel& m) { return encode(s.tokens, m); }

class LexicalEncoder final : public EmbeddingProvider {
 public:
  explicit LexicalEncoder(LexicalModel model) : model_(std::move(model)) {}

  std::size_t dimension() const override { return model_.dim; }
  SentenceVec embed(std::string_view, const Sentence& s) const override {
    return encode(s, model_);
  }
  Json describe() const override {
    Json j;
    j["kind"] = "lexical";
    j["buckets"] = model_.buckets;
    j["dim"] = model_.dim;
    j["stopwords"] = std::string(kStopwordListVersion);
    return j;
  }
  const LexicalModel& model() const { return model_; }

 private:
  LexicalModel model_;
};

// ---- precomputed vectors ----

inline constexpr std::string_view kEmbeddingMagic = "ECTEMB01";

class PrecomputedEmbeddings final : public EmbeddingProvider {
 public:
  PrecomputedEmbeddings(std::map<std::string, std::vector<double>> vectors, std::string source)
      : vectors_(std::move(vectors)), source_(std::move(source)) {
    if (vectors_.empty()) throw FormatError("embedding file has no vectors");
    dim_ = vectors_.begin()->second.size();
    for (const auto& [id, v] : vectors_) {
      if (v.size() != dim_)
        throw FormatError("ragged embedding dimensions: '" + id + "' has " +
                          std::to_string(v.size()) + ", expected " + std::to_string(dim_));
      for (double x : v)
        if (!std::isfinite(x)) throw FormatError("non-finite value in embedding '" + id + "'");
    }
  }

  std::size_t dimension() const override { return dim_; }
  SentenceVec embed(std::string_view sentence_id, const Sentence&) const override {
    auto it = vectors_.find(std::string(sentence_id));
    if (it == vectors_.end()) throw MissingEmbedding("no embedding for '" + std::string(sentence_id) + "'");
    return SentenceVec(it->second);
  }
  Json describe() const override {
    Json j;
    j["kind"] = "precomputed";
    j["source"] = source_;
    j["dim"] = dim_;
    return j;
  }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::map<std::string, std::vector<double>> vectors_;
  std::string source_;
  std::size_t dim_ = 0;
};

// Binary layout: "ECTEMB01", u32 dim, u64 count, then per record
// u32 id length, id bytes, dim little-endian float32 values.
inline std::string serialize_embeddings_binary(
    const std::map<std::string, std::vector<double>>& vectors) {
  ByteWriter w;
  w.raw(kEmbeddingMagic);
  std::size_t dim = vectors.empty() ? 0 : vectors.begin()->second.size();
  w.u32(static_cast<std::uint32_t>(dim));
  w.u64(vectors.size());
  for (const auto& [id, v] : vectors) {
    if (v.size() != dim) throw FormatError("ragged embedding dimensions for '" + id + "'");
    w.str(id);
    for (double x : v) w.f32(static_cast<float>(x));
  }
  return w.bytes();
}

// Reads either the binary layout above or line-delimited JSON records
// {"sentence_id": "...", "vector": [floats]}.
inline PrecomputedEmbeddings load_precomputed(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  std::map<std::string, std::vector<double>> vectors;
  if (std::string_view(bytes).starts_with(kEmbeddingMagic)) {
    ByteReader r(bytes);
    r.raw(kEmbeddingMagic.size());
    std::uint32_t dim = r.u32();
    std::uint64_t count = r.u64();
    for (std::uint64_t i = 0; i < count; ++i) {
      std::string id = r.str();
      std::vector<double> v(dim);
      for (auto& x : v) x = r.f32();
      if (!vectors.emplace(std::move(id), std::move(v)).second)
        throw FormatError("duplicate sentence id in " + path.string());
    }
    if (!r.done()) throw FormatError("trailing bytes in " + path.string());
  } else {
    for (const auto& rec : read_jsonl(path)) {
      auto id = require<std::string>(rec, "sentence_id");
      auto v = require<std::vector<double>>(rec, "vector");
      if (!vectors.emplace(id, std::move(v)).second)
        throw FormatError("duplicate sentence id '" + id + "' in " + path.string());
    }
  }
  return PrecomputedEmbeddings(std::move(vectors), path.filename().string());
}

}  // namespace ectsum
