#pragma once

// Shared helpers for the test binaries: fixture access, scratch
// directories and a seeded synthetic corpus generator.

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "ectsum/corpus.hpp"
#include "ectsum/encoder.hpp"
#include "ectsum/records.hpp"
#include "ectsum/rng.hpp"

namespace ectsum::testing {

namespace fs = std::filesystem;

inline fs::path fixture_dir() { return fs::path(ECTSUM_FIXTURE_DIR); }

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("ectsum-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Cleans and pairs the bundled fixture in memory.
inline std::vector<DocumentSummaryPair> fixture_pairs() {
  std::vector<Transcript> ts;
  for (const auto& j : read_jsonl(fixture_dir() / "transcripts.jsonl")) {
    auto r = clean_transcript(raw_transcript_from_json(j));
    if (auto* t = std::get_if<Transcript>(&r)) ts.push_back(std::move(*t));
  }
  std::vector<SummaryArticle> as;
  for (const auto& j : read_jsonl(fixture_dir() / "articles.jsonl"))
    as.push_back(clean_summary(raw_article_from_json(j)));
  return pair_documents(ts, as);
}

inline LexicalEncoder fit_encoder(const std::vector<DocumentSummaryPair>& pairs,
                                  std::size_t buckets = 4096, std::size_t dim = 0) {
  std::vector<std::vector<std::string>> docs;
  for (const auto& p : pairs) {
    for (const auto& s : p.transcript.sentences) docs.push_back(s.tokens);
    for (const auto& b : p.summary.bullets) docs.push_back(b.tokens);
  }
  return LexicalEncoder(fit_lexical(docs, buckets, dim));
}

// ---- synthetic corpus ----

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> w = {
      "customers", "demand",    "platform", "pipeline", "strategy", "teams",     "markets",
      "execution", "momentum",  "pricing",  "supply",   "channels", "portfolio", "growth",
      "investment", "discipline", "partners", "segments", "orders",  "inventory", "backlog",
      "retention", "engagement", "programs", "capacity", "network", "products",  "services"};
  return w;
}

inline const std::vector<std::string>& metric_words() {
  static const std::vector<std::string> w = {"revenue",   "sales",       "earnings per share",
                                             "net income", "gross margin", "operating income",
                                             "free cash flow", "dividend",  "bookings"};
  return w;
}

inline std::string pick(Rng& rng, const std::vector<std::string>& v) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

// A random numeral from the fixture grammar: plain, currency, percent,
// with decimals, thousands groups and magnitude words.
inline std::string random_numeral(Rng& rng) {
  std::string digits;
  switch (rng.below(4)) {
    case 0: digits = std::to_string(rng.below(100)); break;
    case 1: digits = std::to_string(rng.below(1000)) + "." + std::to_string(10 + rng.below(90)); break;
    case 2: digits = std::to_string(1 + rng.below(99)) + "," + std::to_string(100 + rng.below(900)); break;
    default: digits = std::to_string(1 + rng.below(9)) + "." + std::to_string(rng.below(10)); break;
  }
  switch (rng.below(5)) {
    case 0: return "$" + digits;
    case 1: return digits + "%";
    case 2: return digits + " percent";
    case 3: return "$" + digits + " " + std::string(rng.below(2) ? "million" : "billion");
    default: return digits;
  }
}

inline std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

inline std::string filler_sentence(Rng& rng) {
  std::string s = "our " + pick(rng, filler_words()) + " and " + pick(rng, filler_words()) +
                  " remained " + std::string(rng.below(2) ? "solid" : "steady") + " across " +
                  pick(rng, filler_words());
  return capitalize(s) + ".";
}

struct SyntheticFact {
  std::string sentence;  // transcript form
  std::string bullet;    // summary form
};

inline SyntheticFact numeric_fact(Rng& rng) {
  std::string metric = pick(rng, metric_words());
  std::string a = random_numeral(rng), b = random_numeral(rng);
  SyntheticFact f;
  f.sentence = capitalize("in the quarter, " + metric + " came in at " + a + ", compared with " + b +
                          " a year ago, driven by " + pick(rng, filler_words()) + ".");
  f.bullet = "q" + std::to_string(1 + rng.below(4)) + " " + metric + " " + a + " vs " + b + ".";
  return f;
}

// A transcript of `n` sentences of which `k` carry the facts that the
// summary bullets restate.
inline DocumentSummaryPair synthetic_pair(Rng& rng, const std::string& id, std::size_t n = 12,
                                          std::size_t k = 3) {
  DocumentSummaryPair p;
  p.pair_id = id;
  p.transcript.company_code = "SYN";
  p.transcript.source_id = id;
  p.transcript.event_date = parse_iso_date("2021-01-01");
  p.summary = {"SYN", p.transcript.event_date, {}, "wire-" + id};
  std::vector<std::size_t> fact_at;
  while (fact_at.size() < std::min(k, n)) {
    std::size_t i = static_cast<std::size_t>(rng.below(n));
    if (std::find(fact_at.begin(), fact_at.end(), i) == fact_at.end()) fact_at.push_back(i);
  }
  std::sort(fact_at.begin(), fact_at.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(fact_at.begin(), fact_at.end(), i) != fact_at.end()) {
      auto f = numeric_fact(rng);
      p.transcript.sentences.push_back(make_sentence(f.sentence, i));
      p.summary.bullets.push_back(make_sentence(f.bullet, p.summary.bullets.size()));
    } else {
      p.transcript.sentences.push_back(make_sentence(filler_sentence(rng), i));
    }
  }
  p.merged_from = {p.summary.source_id};
  return p;
}

inline std::vector<DocumentSummaryPair> synthetic_corpus(std::uint64_t seed, std::size_t count,
                                                         std::size_t n = 12, std::size_t k = 3) {
  Rng rng(seed);
  std::vector<DocumentSummaryPair> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string id = "syn-" + std::string(i < 10 ? "00" : (i < 100 ? "0" : "")) + std::to_string(i);
    out.push_back(synthetic_pair(rng, id, n, k));
  }
  return out;
}

}  // namespace ectsum::testing
