#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ectsum {

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;  // lowercase
  std::size_t index = 0;            // 0-based position in the document

  std::size_t word_count() const { return tokens.size(); }
};

namespace text_detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_ascii_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// UTF-8 punctuation that commonly wraps words in scraped transcripts.
inline constexpr std::array<std::string_view, 7> kUtf8Punct = {
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99",
    "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\xA2"};

inline std::size_t utf8_punct_prefix(std::string_view s) {
  for (auto p : kUtf8Punct)
    if (s.starts_with(p)) return p.size();
  return 0;
}

inline std::size_t utf8_punct_suffix(std::string_view s) {
  for (auto p : kUtf8Punct)
    if (s.ends_with(p)) return p.size();
  return 0;
}

inline constexpr std::string_view kLeadingStrip = "\"'([{<*";
inline constexpr std::string_view kTrailingStrip = ".,;:!?\"')]}>";

inline std::string_view strip_leading(std::string_view w) {
  for (;;) {
    if (!w.empty() && kLeadingStrip.find(w.front()) != std::string_view::npos) {
      w.remove_prefix(1);
    } else if (auto n = utf8_punct_prefix(w); n > 0) {
      w.remove_prefix(n);
    } else {
      return w;
    }
  }
}

inline std::string_view strip_trailing(std::string_view w) {
  for (;;) {
    if (!w.empty() && kTrailingStrip.find(w.back()) != std::string_view::npos) {
      w.remove_suffix(1);
    } else if (auto n = utf8_punct_suffix(w); n > 0) {
      w.remove_suffix(n);
    } else {
      return w;
    }
  }
}

// A token survives only if it carries at least one letter, digit or
// non-ASCII (non-punctuation) byte.
inline bool is_content(std::string_view w) {
  for (std::size_t i = 0; i < w.size();) {
    if (auto n = utf8_punct_prefix(w.substr(i)); n > 0) {
      i += n;
      continue;
    }
    unsigned char c = static_cast<unsigned char>(w[i]);
    if (c >= 0x80 || std::isalnum(c)) return true;
    ++i;
  }
  return false;
}

}  // namespace text_detail

// Shared tokenizer: whitespace split, wrapping punctuation detached and
// discarded, ASCII lowercased. Numerals such as "$2.74" or "1,520" stay
// whole because inner punctuation is never split.
inline std::vector<std::string> tokenize(std::string_view text) {
  using namespace text_detail;
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (start == i) break;
    std::string_view w = strip_trailing(strip_leading(text.substr(start, i - start)));
    if (w.empty() || !is_content(w)) continue;
    std::string tok(w);
    for (auto& c : tok) c = ascii_lower(c);
    out.push_back(std::move(tok));
  }
  return out;
}

// Abbreviations whose trailing period never ends a sentence. Lowercase,
// period included.
inline constexpr std::array<std::string_view, 19> kAbbreviations = {
    "inc.", "corp.", "ltd.", "co.",  "mr.",  "mrs.", "ms.",
    "dr.",  "jr.",   "sr.",  "vs.",  "u.s.", "u.k.", "e.g.",
    "i.e.", "q1.",   "q2.",  "q3.",  "q4."};

inline bool is_abbreviation(std::string_view word) {
  std::string w(text_detail::strip_leading(word));
  for (auto& c : w) c = text_detail::ascii_lower(c);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), w) !=
         kAbbreviations.end();
}

namespace text_detail {

inline bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }
inline bool is_closer(char c) {
  return is_terminator(c) || c == '"' || c == '\'' || c == ')' || c == ']';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Byte offsets one past each sentence end.
inline std::vector<std::size_t> sentence_ends(std::string_view text) {
  std::vector<std::size_t> ends;
  std::size_t p = 0;
  while (p < text.size()) {
    char c = text[p];
    if (!is_terminator(c)) {
      ++p;
      continue;
    }
    if (c == '.') {
      bool digit_before = p > 0 && std::isdigit(static_cast<unsigned char>(text[p - 1]));
      bool digit_after = p + 1 < text.size() &&
                         std::isdigit(static_cast<unsigned char>(text[p + 1]));
      if (digit_before && digit_after) {
        ++p;
        continue;
      }
      std::size_t word_start = p;
      while (word_start > 0 && !is_space(text[word_start - 1])) --word_start;
      if (is_abbreviation(text.substr(word_start, p + 1 - word_start))) {
        ++p;
        continue;
      }
    }
    std::size_t end = p + 1;
    while (end < text.size() && is_closer(text[end])) ++end;
    if (end == text.size() || is_space(text[end])) {
      ends.push_back(end);
      p = end;
    } else {
      ++p;
    }
  }
  if (ends.empty() || ends.back() != text.size()) ends.push_back(text.size());
  return ends;
}

}  // namespace text_detail

// Splits on '.', '?' or '!' (plus any closing quotes/brackets) followed by
// whitespace or end of text. Never splits after an abbreviation from
// kAbbreviations or on a decimal point. Sentences without tokens are dropped.
inline std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> out;
  std::size_t begin = 0;
  for (std::size_t end : text_detail::sentence_ends(text)) {
    std::string_view piece = text_detail::trim(text.substr(begin, end - begin));
    begin = end;
    if (piece.empty()) continue;
    Sentence s;
    s.text = std::string(piece);
    s.tokens = tokenize(piece);
    if (s.tokens.empty()) continue;
    s.index = out.size();
    out.push_back(std::move(s));
  }
  return out;
}

inline Sentence make_sentence(std::string_view text, std::size_t index = 0) {
  return Sentence{std::string(text), tokenize(text), index};
}

// Concatenated tokens of a sentence list.
inline std::vector<std::string> flatten_tokens(const std::vector<Sentence>& sentences) {
  std::vector<std::string> out;
  for (const auto& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  return out;
}

inline std::string join_texts(const std::vector<Sentence>& sentences,
                              std::string_view sep = " ") {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += sep;
    out += s.text;
  }
  return out;
}

}  // namespace ectsum
