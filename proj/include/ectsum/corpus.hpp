#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ectsum/error.hpp"
#include "ectsum/records.hpp"
#include "ectsum/rng.hpp"
#include "ectsum/text.hpp"

namespace ectsum {

using Date = std::chrono::year_month_day;

inline Date parse_iso_date(std::string_view s) {
  auto bad = [&] { return FormatError("bad ISO-8601 date '" + std::string(s) + "'"); };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw bad();
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') throw bad();
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  Date d{std::chrono::year{num(0, 4)}, std::chrono::month{static_cast<unsigned>(num(5, 2))},
         std::chrono::day{static_cast<unsigned>(num(8, 2))}};
  if (!d.ok()) throw bad();
  return d;
}

inline std::string format_iso_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

inline long days_between(const Date& from, const Date& to) {
  return (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count();
}

struct TranscriptBlock {
  std::string role;     // speaker role, e.g. "operator", "ceo"
  std::string text;
  std::string heading;  // optional section heading
  std::string section;  // optional section tag, e.g. "prepared", "qa"
};

struct RawTranscript {
  std::string source_id;
  std::string company_code;
  Date event_date;
  std::vector<TranscriptBlock> blocks;
};

struct RawArticle {
  std::string source_id;
  std::string company_code;
  Date post_date;
  std::string body;
};

struct Transcript {
  std::string company_code;
  Date event_date;
  std::vector<Sentence> sentences;  // prepared remarks only
  std::string source_id;
};

struct SummaryArticle {
  std::string company_code;
  Date post_date;
  std::vector<Sentence> bullets;
  std::string source_id;
};

enum class RejectReason { kNoPreparedRemarks };

struct Rejected {
  std::string source_id;
  RejectReason reason = RejectReason::kNoPreparedRemarks;
};

using CleanResult = std::variant<Transcript, Rejected>;

struct DocumentSummaryPair {
  std::string pair_id;
  Transcript transcript;
  SummaryArticle summary;
  std::vector<std::string> merged_from;  // article ids
};

struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

namespace corpus_detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = text_detail::ascii_lower(c);
  return out;
}

inline bool contains(std::string_view hay, std::string_view needle) {
  return hay.find(needle) != std::string_view::npos;
}

inline bool is_operator_role(std::string_view role) {
  auto r = lower(text_detail::trim(role));
  return r == "operator" || r == "moderator";
}

inline bool is_qa_section(const TranscriptBlock& b) {
  auto section = lower(b.section);
  if (section == "qa" || section == "q&a" || contains(section, "question")) return true;
  auto heading = lower(b.heading);
  return contains(heading, "question") && contains(heading, "answer");
}

inline bool announces_questions(std::string_view text) {
  auto t = lower(text);
  for (std::string_view cue : {"question-and-answer", "question and answer", "q&a",
                               "first question", "open the line for questions",
                               "open the call for questions", "open it up for questions"})
    if (contains(t, cue)) return true;
  return false;
}

inline void reindex(std::vector<Sentence>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i].index = i;
}

}  // namespace corpus_detail

// Keeps the prepared remarks: drops the operator introduction (operator or
// moderator blocks before the first other speaker) and everything from the
// Q&A boundary on. The boundary is the first block tagged or headed as
// questions-and-answers, or the first operator block after the remarks began
// that announces questions.
inline CleanResult clean_transcript(const RawTranscript& raw) {
  using namespace corpus_detail;
  const auto& blocks = raw.blocks;
  std::size_t first_speaker = blocks.size();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!is_operator_role(blocks[i].role)) {
      first_speaker = i;
      break;
    }
  }
  std::size_t qa = blocks.size();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    bool op_cue = i > first_speaker && is_operator_role(blocks[i].role) &&
                  announces_questions(blocks[i].text);
    if (is_qa_section(blocks[i]) || op_cue) {
      qa = i;
      break;
    }
  }
  if (first_speaker >= qa) return Rejected{raw.source_id, RejectReason::kNoPreparedRemarks};

  Transcript t{raw.company_code, raw.event_date, {}, raw.source_id};
  for (std::size_t i = first_speaker; i < qa; ++i) {
    for (auto& s : split_sentences(blocks[i].text)) t.sentences.push_back(std::move(s));
  }
  if (t.sentences.empty()) return Rejected{raw.source_id, RejectReason::kNoPreparedRemarks};
  reindex(t.sentences);
  return t;
}

// True when the sentence's last four tokens contain "refinitiv ibes data".
inline bool is_refinitiv_estimate(const Sentence& s) {
  const auto& tok = s.tokens;
  std::size_t from = tok.size() > 4 ? tok.size() - 4 : 0;
  std::string tail;
  for (std::size_t i = from; i < tok.size(); ++i) {
    if (!tail.empty()) tail += ' ';
    tail += tok[i];
  }
  return corpus_detail::contains(tail, "refinitiv ibes data");
}

// Splits the article body line by line (bullet markers stripped) into
// sentences, removes analyst-estimate sentences and exact duplicates.
inline SummaryArticle clean_summary(const RawArticle& raw) {
  SummaryArticle a{raw.company_code, raw.post_date, {}, raw.source_id};
  std::unordered_set<std::string> seen;
  std::string_view body = raw.body;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t nl = body.find('\n', pos);
    if (nl == std::string_view::npos) nl = body.size();
    std::string_view line = text_detail::trim(body.substr(pos, nl - pos));
    pos = nl + 1;
    for (std::string_view marker : {"* ", "- ", "\xE2\x80\xA2 ", "\xC2\xB7 "}) {
      if (line.starts_with(marker)) {
        line = text_detail::trim(line.substr(marker.size()));
        break;
      }
    }
    for (auto& s : split_sentences(line)) {
      if (is_refinitiv_estimate(s)) continue;
      if (!seen.insert(s.text).second) continue;
      a.bullets.push_back(std::move(s));
    }
  }
  corpus_detail::reindex(a.bullets);
  return a;
}

// Joins transcripts to articles with the same company code posted on the
// event day or the day after. Several matching articles are merged: their
// distinct bullets are concatenated in (post_date, source_id) order.
// max_merge > 0 caps the number of merged articles. Transcripts without a
// matching article are omitted. Output is ordered by pair_id.
inline std::vector<DocumentSummaryPair> pair_documents(const std::vector<Transcript>& transcripts,
                                                       const std::vector<SummaryArticle>& articles,
                                                       std::size_t max_merge = 0) {
  std::map<std::pair<std::string, long>, std::vector<std::string>> events;
  for (const auto& t : transcripts) {
    long day = std::chrono::sys_days{t.event_date}.time_since_epoch().count();
    events[{t.company_code, day}].push_back(t.source_id);
  }
  for (auto& [key, ids] : events) {
    if (ids.size() > 1) {
      std::sort(ids.begin(), ids.end());
      throw AmbiguousEvent(ids);
    }
  }

  std::map<std::string, std::vector<const SummaryArticle*>> by_company;
  for (const auto& a : articles) by_company[a.company_code].push_back(&a);

  std::vector<DocumentSummaryPair> out;
  for (const auto& t : transcripts) {
    std::vector<const SummaryArticle*> cands;
    if (auto it = by_company.find(t.company_code); it != by_company.end()) {
      for (const auto* a : it->second) {
        long gap = days_between(t.event_date, a->post_date);
        if (gap >= 0 && gap <= 1 && !a->bullets.empty()) cands.push_back(a);
      }
    }
    if (cands.empty()) continue;
    std::sort(cands.begin(), cands.end(), [](const auto* x, const auto* y) {
      auto dx = std::chrono::sys_days{x->post_date}, dy = std::chrono::sys_days{y->post_date};
      return std::tie(dx, x->source_id) < std::tie(dy, y->source_id);
    });
    if (max_merge > 0 && cands.size() > max_merge) cands.resize(max_merge);

    DocumentSummaryPair p;
    p.pair_id = t.source_id;
    p.transcript = t;
    p.summary.company_code = t.company_code;
    p.summary.post_date = cands.front()->post_date;
    std::unordered_set<std::string> seen;
    for (const auto* a : cands) {
      p.merged_from.push_back(a->source_id);
      for (const auto& b : a->bullets)
        if (seen.insert(b.text).second) p.summary.bullets.push_back(b);
    }
    corpus_detail::reindex(p.summary.bullets);
    for (const auto& id : p.merged_from) {
      if (!p.summary.source_id.empty()) p.summary.source_id += '+';
      p.summary.source_id += id;
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; });
  return out;
}

// Independent re-check of the pairing invariants against the article set.
// Returns one message per violation.
inline std::vector<std::string> validate_pairs(const std::vector<DocumentSummaryPair>& pairs,
                                               const std::vector<SummaryArticle>& articles) {
  std::map<std::string, const SummaryArticle*> by_id;
  for (const auto& a : articles) by_id[a.source_id] = &a;
  std::vector<std::string> problems;
  for (const auto& p : pairs) {
    if (p.transcript.company_code != p.summary.company_code)
      problems.push_back(p.pair_id + ": company code mismatch");
    for (const auto& id : p.merged_from) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        problems.push_back(p.pair_id + ": unknown article " + id);
        continue;
      }
      const auto* a = it->second;
      if (a->company_code != p.transcript.company_code)
        problems.push_back(p.pair_id + ": article " + id + " has another company code");
      long gap = days_between(p.transcript.event_date, a->post_date);
      if (gap < 0 || gap > 1)
        problems.push_back(p.pair_id + ": article " + id + " outside the date window");
    }
    std::set<std::string> texts;
    for (const auto& b : p.summary.bullets)
      if (!texts.insert(b.text).second)
        problems.push_back(p.pair_id + ": duplicate bullet '" + b.text + "'");
  }
  return problems;
}

// Seeded shuffle of the sorted ids; validation = floor(n/10), test =
// floor(n/5), train takes the remainder.
inline CorpusSplit split_corpus(std::vector<std::string> pair_ids, std::uint64_t seed) {
  if (pair_ids.size() < 10)
    throw SplitTooSmall("need at least 10 pairs to split, got " +
                        std::to_string(pair_ids.size()));
  std::sort(pair_ids.begin(), pair_ids.end());
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(pair_ids));
  const std::size_t n = pair_ids.size();
  const std::size_t n_val = n / 10;
  const std::size_t n_test = n / 5;
  const std::size_t n_train = n - n_val - n_test;
  CorpusSplit s;
  s.seed = seed;
  s.train.assign(pair_ids.begin(), pair_ids.begin() + static_cast<long>(n_train));
  s.validation.assign(pair_ids.begin() + static_cast<long>(n_train),
                      pair_ids.begin() + static_cast<long>(n_train + n_val));
  s.test.assign(pair_ids.begin() + static_cast<long>(n_train + n_val), pair_ids.end());
  return s;
}

// ---- record conversion ----

inline RawTranscript raw_transcript_from_json(const Json& j) {
  RawTranscript t;
  t.source_id = require<std::string>(j, "source_id");
  t.company_code = require<std::string>(j, "company_code");
  t.event_date = parse_iso_date(require<std::string>(j, "event_date"));
  if (!j.contains("blocks") || !j["blocks"].is_array())
    throw FormatError("transcript " + t.source_id + ": missing 'blocks' array");
  for (const auto& b : j["blocks"]) {
    TranscriptBlock block;
    block.role = b.value("role", "");
    block.text = b.value("text", "");
    block.heading = b.value("heading", "");
    block.section = b.value("section", "");
    t.blocks.push_back(std::move(block));
  }
  return t;
}

inline RawArticle raw_article_from_json(const Json& j) {
  RawArticle a;
  a.source_id = require<std::string>(j, "source_id");
  a.company_code = require<std::string>(j, "company_code");
  a.post_date = parse_iso_date(require<std::string>(j, "post_date"));
  a.body = require<std::string>(j, "body");
  return a;
}

inline Json sentences_to_json(const std::vector<Sentence>& v) {
  Json arr = Json::array();
  for (const auto& s : v) arr.push_back(s.text);
  return arr;
}

inline std::vector<Sentence> sentences_from_json(const Json& arr) {
  std::vector<Sentence> v;
  for (const auto& t : arr) v.push_back(make_sentence(t.get<std::string>(), v.size()));
  return v;
}

inline Json to_json(const Transcript& t) {
  Json j;
  j["source_id"] = t.source_id;
  j["company_code"] = t.company_code;
  j["event_date"] = format_iso_date(t.event_date);
  j["sentences"] = sentences_to_json(t.sentences);
  return j;
}

inline Transcript transcript_from_json(const Json& j) {
  return Transcript{require<std::string>(j, "company_code"),
                    parse_iso_date(require<std::string>(j, "event_date")),
                    sentences_from_json(require<Json>(j, "sentences")),
                    require<std::string>(j, "source_id")};
}

inline Json to_json(const SummaryArticle& a) {
  Json j;
  j["source_id"] = a.source_id;
  j["company_code"] = a.company_code;
  j["post_date"] = format_iso_date(a.post_date);
  j["bullets"] = sentences_to_json(a.bullets);
  return j;
}

inline SummaryArticle article_from_json(const Json& j) {
  return SummaryArticle{require<std::string>(j, "company_code"),
                        parse_iso_date(require<std::string>(j, "post_date")),
                        sentences_from_json(require<Json>(j, "bullets")),
                        require<std::string>(j, "source_id")};
}

inline Json to_json(const DocumentSummaryPair& p) {
  Json j;
  j["pair_id"] = p.pair_id;
  j["company_code"] = p.transcript.company_code;
  j["event_date"] = format_iso_date(p.transcript.event_date);
  j["post_date"] = format_iso_date(p.summary.post_date);
  j["transcript_id"] = p.transcript.source_id;
  j["merged_from"] = p.merged_from;
  j["document"] = sentences_to_json(p.transcript.sentences);
  j["summary"] = sentences_to_json(p.summary.bullets);
  return j;
}

inline DocumentSummaryPair pair_from_json(const Json& j) {
  DocumentSummaryPair p;
  p.pair_id = require<std::string>(j, "pair_id");
  p.merged_from = require<std::vector<std::string>>(j, "merged_from");
  p.transcript.company_code = require<std::string>(j, "company_code");
  p.transcript.event_date = parse_iso_date(require<std::string>(j, "event_date"));
  p.transcript.source_id = require<std::string>(j, "transcript_id");
  p.transcript.sentences = sentences_from_json(require<Json>(j, "document"));
  p.summary.company_code = p.transcript.company_code;
  p.summary.post_date = parse_iso_date(require<std::string>(j, "post_date"));
  p.summary.bullets = sentences_from_json(require<Json>(j, "summary"));
  for (const auto& id : p.merged_from) {
    if (!p.summary.source_id.empty()) p.summary.source_id += '+';
    p.summary.source_id += id;
  }
  return p;
}

inline Json to_json(const CorpusSplit& s) {
  Json j;
  j["seed"] = s.seed;
  j["train"] = s.train;
  j["validation"] = s.validation;
  j["test"] = s.test;
  return j;
}

inline CorpusSplit split_from_json(const Json& j) {
  CorpusSplit s;
  s.seed = require<std::uint64_t>(j, "seed");
  s.train = require<std::vector<std::string>>(j, "train");
  s.validation = require<std::vector<std::string>>(j, "validation");
  s.test = require<std::vector<std::string>>(j, "test");
  return s;
}

// Loads the public release layout: <dir>/{train,val,test}/{ects,gt_summaries}/<name>.txt
// (or a single <dir>/{ects,gt_summaries}). Each non-blank line of an ECT
// file is sentence-split; each non-blank summary line is one or more bullets.
inline std::vector<DocumentSummaryPair> load_release_pairs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> roots;
  for (const char* split : {"train", "val", "test"})
    if (fs::is_directory(dir / split / "ects")) roots.push_back(dir / split);
  if (roots.empty() && fs::is_directory(dir / "ects")) roots.push_back(dir);
  if (roots.empty()) throw MissingInput("no ects/ directory under " + dir.string());

  auto read_lines = [](const fs::path& p) {
    std::vector<Sentence> out;
    std::string content = read_file(p);
    std::size_t pos = 0;
    while (pos < content.size()) {
      std::size_t nl = content.find('\n', pos);
      if (nl == std::string::npos) nl = content.size();
      for (auto& s : split_sentences(std::string_view(content).substr(pos, nl - pos)))
        out.push_back(std::move(s));
      pos = nl + 1;
    }
    corpus_detail::reindex(out);
    return out;
  };

  std::vector<DocumentSummaryPair> pairs;
  for (const auto& root : roots) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(root / "ects"))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      fs::path summary = root / "gt_summaries" / f.filename();
      if (!fs::exists(summary)) continue;
      DocumentSummaryPair p;
      p.pair_id = root.filename().string() + "/" + f.stem().string();
      p.transcript.source_id = p.pair_id;
      p.transcript.sentences = read_lines(f);
      p.summary.bullets = read_lines(summary);
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

}  // namespace ectsum
