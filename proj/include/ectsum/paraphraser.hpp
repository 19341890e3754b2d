#pragma once

// Placeholder-protected rewriting of extracted sentences into bullets:
// numerals are masked, the masked text goes through a rewrite backend, and
// values are restored afterwards. Backends only ever see placeholders, so
// a bullet can lose a value but cannot alter one.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <regex>
#include <string>
#include <variant>
#include <vector>

#include <unistd.h>

#include "ectsum/error.hpp"
#include "ectsum/labels.hpp"
#include "ectsum/masking.hpp"
#include "ectsum/numeral.hpp"
#include "ectsum/records.hpp"
#include "ectsum/rewrite_rules.hpp"
#include "ectsum/text.hpp"

namespace ectsum {

class RewriteBackend {
 public:
  virtual ~RewriteBackend() = default;
  virtual std::string name() const = 0;
  virtual std::string rewrite(const std::string& masked) const = 0;
  // One output per input, same order. Subprocess backends override this to
  // amortize process start-up.
  virtual std::vector<std::string> rewrite_batch(const std::vector<std::string>& masked) const {
    std::vector<std::string> out;
    out.reserve(masked.size());
    for (const auto& m : masked) out.push_back(rewrite(m));
    return out;
  }
  virtual Json describe() const {
    Json j;
    j["backend"] = name();
    return j;
  }
};

class IdentityBackend final : public RewriteBackend {
 public:
  std::string name() const override { return "identity"; }
  std::string rewrite(const std::string& masked) const override { return masked; }
};

// ---- rule-based rewriter ----

struct RegexRule {
  std::string pattern;
  std::string replace;
  std::regex compiled;
};

struct RuleTable {
  std::string version;
  std::vector<RegexRule> quarters;
  std::vector<std::string> openers;
  std::vector<RegexRule> substitutions;
};

namespace rewrite_detail {

inline constexpr char kMarkOpen = '\x1e';
inline constexpr char kMarkClose = '\x1f';

inline std::string expand_placeholder_macro(std::string pattern) {
  static const std::string kMacro = "{PH}";
  static const std::string kMarker = std::string(1, kMarkOpen) + "[0-9]+" + std::string(1, kMarkClose);
  for (std::size_t i; (i = pattern.find(kMacro)) != std::string::npos;)
    pattern.replace(i, kMacro.size(), kMarker);
  return pattern;
}

inline std::vector<RegexRule> parse_rules(const Json& arr, const char* field) {
  std::vector<RegexRule> out;
  if (!arr.is_array()) throw ConfigError(std::string("rule table field '") + field + "' must be a list");
  for (const auto& r : arr) {
    RegexRule rule;
    rule.pattern = require<std::string>(r, "pattern");
    rule.replace = require<std::string>(r, "replace");
    try {
      rule.compiled = std::regex(expand_placeholder_macro(rule.pattern), std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw ConfigError("bad rewrite pattern '" + rule.pattern + "': " + e.what());
    }
    out.push_back(std::move(rule));
  }
  return out;
}

inline void collapse_spaces(std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (text_detail::is_space(c)) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      if ((c == ',' || c == '.' || c == ';' || c == ':') && !out.empty() && out.back() == ' ')
        out.pop_back();
      out += c;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  s = std::move(out);
}

// Trailing punctuation normalized to a single period.
inline void terminal_period(std::string& s) {
  while (!s.empty() && (s.back() == ',' || s.back() == ';' || s.back() == ':' || s.back() == ' ' ||
                        s.back() == '!' || s.back() == '?'))
    s.pop_back();
  if (!s.empty() && s.back() != '.') s += '.';
}

inline void lowercase_ascii(std::string& s) {
  for (auto& c : s) c = text_detail::ascii_lower(c);
}

inline bool strip_opener(std::string& s, const std::vector<std::string>& openers) {
  for (const auto& o : openers) {
    if (!s.starts_with(o)) continue;
    bool boundary = o.back() == ',' || s.size() == o.size() ||
                    !text_detail::is_ascii_alnum(s[o.size()]);
    if (!boundary) continue;
    std::size_t k = o.size();
    while (k < s.size() && (s[k] == ' ' || s[k] == ',')) ++k;
    s.erase(0, k);
    return true;
  }
  return false;
}

}  // namespace rewrite_detail

inline RuleTable parse_rule_table(const Json& j) {
  using namespace rewrite_detail;
  RuleTable t;
  t.version = require<std::string>(j, "version");
  t.quarters = parse_rules(require<Json>(j, "quarters"), "quarters");
  t.openers = require<std::vector<std::string>>(j, "openers");
  // Longest first so "in the" never shadows a longer opener sharing its prefix.
  std::stable_sort(t.openers.begin(), t.openers.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  t.substitutions = parse_rules(require<Json>(j, "substitutions"), "substitutions");
  return t;
}

inline const RuleTable& default_rule_table() {
  static const RuleTable table = parse_rule_table(Json::parse(kDefaultRuleTable));
  return table;
}

inline RuleTable load_rule_table(const std::filesystem::path& path) {
  try {
    return parse_rule_table(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw ConfigError("cannot parse rule table " + path.string() + ": " + e.what());
  }
}

// Lowercase, opener removal, quarter phrases, substitutions, whitespace and
// period normalization, repeated until nothing changes. Placeholder tokens
// pass through byte-for-byte.
inline std::string rule_rewrite(std::string_view masked, const RuleTable& table = default_rule_table()) {
  using namespace rewrite_detail;
  auto occ = find_placeholders(masked);
  std::vector<std::string> originals;
  std::string s;
  std::size_t pos = 0;
  for (const auto& o : occ) {
    s.append(masked.substr(pos, o.begin - pos));
    s += kMarkOpen + std::to_string(originals.size()) + kMarkClose;
    originals.emplace_back(masked.substr(o.begin, o.end - o.begin));
    pos = o.end;
  }
  s.append(masked.substr(pos));

  for (int round = 0; round < 16; ++round) {
    std::string before = s;
    lowercase_ascii(s);
    collapse_spaces(s);
    while (strip_opener(s, table.openers)) {
    }
    for (const auto& r : table.quarters) s = std::regex_replace(s, r.compiled, r.replace);
    collapse_spaces(s);
    for (const auto& r : table.substitutions) s = std::regex_replace(s, r.compiled, r.replace);
    collapse_spaces(s);
    terminal_period(s);
    if (s == before) break;
  }

  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == kMarkOpen) {
      std::size_t j = s.find(kMarkClose, i);
      out += originals.at(std::stoul(s.substr(i + 1, j - i - 1)));
      i = j;
    } else {
      out += s[i];
    }
  }
  return out;
}

class RuleBackend final : public RewriteBackend {
 public:
  RuleBackend() : table_(default_rule_table()) {}
  explicit RuleBackend(RuleTable table) : table_(std::move(table)) {}
  std::string name() const override { return "rule"; }
  std::string rewrite(const std::string& masked) const override { return rule_rewrite(masked, table_); }
  Json describe() const override {
    Json j;
    j["backend"] = name();
    j["rules"] = table_.version;
    return j;
  }

 private:
  RuleTable table_;
};

// External rewriter: `command` reads masked lines on stdin and writes one
// rewritten line per input line on stdout, in order.
class SubprocessBackend final : public RewriteBackend {
 public:
  explicit SubprocessBackend(std::string command) : command_(std::move(command)) {}
  std::string name() const override { return "subprocess"; }
  std::string rewrite(const std::string& masked) const override { return rewrite_batch({masked}).at(0); }

  std::vector<std::string> rewrite_batch(const std::vector<std::string>& masked) const override {
    if (masked.empty()) return {};
    std::string templ = (std::filesystem::temp_directory_path() / "ectsum_rewrite_XXXXXX").string();
    int fd = ::mkstemp(templ.data());
    if (fd < 0) throw IoError("cannot create rewrite input in " + templ);
    ::close(fd);
    std::filesystem::path in_path = templ;
    {
      std::ofstream in(in_path, std::ios::binary | std::ios::trunc);
      if (!in) throw IoError("cannot write rewrite input " + in_path.string());
      for (auto line : masked) {
        std::replace(line.begin(), line.end(), '\n', ' ');
        in << line << '\n';
      }
    }
    std::string cmd = command_ + " < '" + in_path.string() + "'";
    std::FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
      std::filesystem::remove(in_path);
      throw IoError("cannot start rewrite backend: " + command_);
    }
    std::string output;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    int status = ::pclose(pipe);
    std::filesystem::remove(in_path);
    if (status != 0) throw BackendViolation("rewrite backend exited with status " + std::to_string(status));
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < output.size()) {
      std::size_t nl = output.find('\n', start);
      if (nl == std::string::npos) nl = output.size();
      std::string line = output.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      start = nl + 1;
    }
    if (lines.size() != masked.size())
      throw BackendViolation("rewrite backend returned " + std::to_string(lines.size()) +
                             " lines for " + std::to_string(masked.size()) + " inputs");
    return lines;
  }

  Json describe() const override {
    Json j;
    j["backend"] = name();
    j["command"] = command_;
    return j;
  }

 private:
  std::string command_;
};

// ---- paraphrase ----

struct Bullet {
  std::string text;
  std::size_t source_sentence_index = 0;
  friend bool operator==(const Bullet&, const Bullet&) = default;
};

struct ValueLoss {
  Bullet partial;
  std::vector<std::string> dropped_names;
  std::vector<std::string> dropped_values;
};

using ParaphraseOutcome = std::variant<Bullet, ValueLoss>;

// Restores values into one backend output and validates it against the source.
inline ParaphraseOutcome finish_paraphrase(const Sentence& source, const MaskedSentence& masked,
                                           std::string rewritten) {
  rewrite_detail::lowercase_ascii(rewritten);
  UnmaskResult r;
  try {
    r = unmask(masked, rewritten);
  } catch (const UnknownPlaceholder& e) {
    throw BackendViolation("rewrite backend invented placeholder [" + e.name() + "]");
  }
  rewrite_detail::collapse_spaces(r.text);
  rewrite_detail::terminal_period(r.text);

  auto source_keys = numeral_keys(source.text);
  std::sort(source_keys.begin(), source_keys.end());
  for (const auto& key : numeral_keys(r.text))
    if (!std::binary_search(source_keys.begin(), source_keys.end(), key))
      throw BackendViolation("bullet contains a value absent from its source: " + key);

  Bullet b{std::move(r.text), source.index};
  if (!r.value_loss()) return b;
  ValueLoss loss{std::move(b), r.dropped, {}};
  for (const auto& name : r.dropped) loss.dropped_values.push_back(masked.find(name)->raw);
  return loss;
}

inline ParaphraseOutcome paraphrase(const Sentence& sentence, const RewriteBackend& backend) {
  auto masked = mask_numerals(sentence);
  return finish_paraphrase(sentence, masked, backend.rewrite(masked.masked_text));
}

inline std::vector<ParaphraseOutcome> paraphrase_all(const std::vector<Sentence>& sentences,
                                                     const RewriteBackend& backend) {
  std::vector<MaskedSentence> masked;
  std::vector<std::string> inputs;
  for (const auto& s : sentences) {
    masked.push_back(mask_numerals(s));
    inputs.push_back(masked.back().masked_text);
  }
  auto outputs = backend.rewrite_batch(inputs);
  if (outputs.size() != inputs.size()) throw BackendViolation("rewrite backend changed the batch size");
  std::vector<ParaphraseOutcome> out;
  for (std::size_t i = 0; i < sentences.size(); ++i)
    out.push_back(finish_paraphrase(sentences[i], masked[i], std::move(outputs[i])));
  return out;
}

inline const Bullet& bullet_of(const ParaphraseOutcome& o) {
  return std::holds_alternative<Bullet>(o) ? std::get<Bullet>(o) : std::get<ValueLoss>(o).partial;
}

// ---- backend training data ----

inline constexpr std::string_view kParaphrasePairsFormat = "ectsum.paraphrase_pairs";

// Writes one record per pair, ordered by pair_id, after `header`.
inline std::size_t export_backend_training_set(std::vector<ParaphrasePair> pairs,
                                               const std::filesystem::path& path,
                                               const StageHeader& header) {
  std::sort(pairs.begin(), pairs.end(),
            [](const ParaphrasePair& a, const ParaphrasePair& b) { return a.pair_id < b.pair_id; });
  RecordWriter w(path, header);
  for (const auto& p : pairs) w.write(to_json(p));
  w.close();
  return pairs.size();
}

}  // namespace ectsum
