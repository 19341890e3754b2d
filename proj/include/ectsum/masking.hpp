#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ectsum/error.hpp"
#include "ectsum/numeral.hpp"
#include "ectsum/text.hpp"

namespace ectsum {

// English cardinal words joined by hyphens: 1 -> "one", 21 -> "twenty-one",
// 342 -> "three-hundred-forty-two".
inline std::string number_words(std::size_t n) {
  static constexpr std::array<std::string_view, 20> kSmall = {
      "zero",    "one",     "two",       "three",    "four",
      "five",    "six",     "seven",     "eight",    "nine",
      "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
      "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
  static constexpr std::array<std::string_view, 10> kTens = {
      "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};
  if (n < 20) return std::string(kSmall[n]);
  if (n < 100) {
    std::string s(kTens[n / 10]);
    if (n % 10) s += "-" + std::string(kSmall[n % 10]);
    return s;
  }
  if (n < 1000) {
    std::string s = std::string(kSmall[n / 100]) + "-hundred";
    if (n % 100) s += "-" + number_words(n % 100);
    return s;
  }
  std::string s = number_words(n / 1000) + "-thousand";
  if (n % 1000) s += "-" + number_words(n % 1000);
  return s;
}

// "num-one", "num-two", ... for 0-based ordinal k.
inline std::string placeholder_name(std::size_t k) { return "num-" + number_words(k + 1); }

struct Placeholder {
  std::string name;  // e.g. "num-one"
  std::string raw;   // exact source substring, currency/magnitude included
  std::string key;   // canonical_key of the numeral

  std::string token() const { return "[" + name + "]"; }
  friend bool operator==(const Placeholder&, const Placeholder&) = default;
};

struct MaskedSentence {
  std::string masked_text;
  std::vector<Placeholder> placeholders;

  const Placeholder* find(std::string_view name) const {
    for (const auto& p : placeholders)
      if (p.name == name) return &p;
    return nullptr;
  }
  friend bool operator==(const MaskedSentence&, const MaskedSentence&) = default;
};

// Replaces every numeral left to right by [num-one], [num-two], ...
inline MaskedSentence mask_numerals(std::string_view text) {
  MaskedSentence m;
  std::size_t pos = 0;
  for (const auto& n : extract_numerals(text)) {
    m.masked_text.append(text.substr(pos, n.begin - pos));
    Placeholder p{placeholder_name(m.placeholders.size()), n.raw, canonical_key(n)};
    m.masked_text += p.token();
    m.placeholders.push_back(std::move(p));
    pos = n.end;
  }
  m.masked_text.append(text.substr(pos));
  return m;
}

inline MaskedSentence mask_numerals(const Sentence& s) { return mask_numerals(s.text); }

// Masks `text` reusing the placeholder names of `reference` for numerals
// with an equal canonical key (each reference placeholder consumed once,
// then reused). Numerals absent from the reference get fresh names that
// continue the reference's numbering.
inline MaskedSentence mask_aligned(std::string_view text, const MaskedSentence& reference) {
  MaskedSentence m;
  std::vector<bool> used(reference.placeholders.size(), false);
  std::size_t fresh = reference.placeholders.size();
  std::size_t pos = 0;
  for (const auto& n : extract_numerals(text)) {
    m.masked_text.append(text.substr(pos, n.begin - pos));
    std::string key = canonical_key(n);
    std::string name;
    for (int pass = 0; pass < 2 && name.empty(); ++pass) {
      for (std::size_t k = 0; k < reference.placeholders.size(); ++k) {
        if (reference.placeholders[k].key == key && (pass == 1 || !used[k])) {
          used[k] = true;
          name = reference.placeholders[k].name;
          break;
        }
      }
    }
    if (name.empty()) name = placeholder_name(fresh++);
    Placeholder p{name, n.raw, key};
    m.masked_text += p.token();
    m.placeholders.push_back(std::move(p));
    pos = n.end;
  }
  m.masked_text.append(text.substr(pos));
  return m;
}

struct PlaceholderOccurrence {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string name;  // lowercased, without brackets
};

// Finds "[num-<letters/hyphens>]" tokens, case-insensitively.
inline std::vector<PlaceholderOccurrence> find_placeholders(std::string_view s) {
  std::vector<PlaceholderOccurrence> out;
  std::size_t i = 0;
  while ((i = s.find('[', i)) != std::string_view::npos) {
    std::size_t j = i + 1;
    std::string name;
    while (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '-')) {
      name += text_detail::ascii_lower(s[j]);
      ++j;
    }
    if (j < s.size() && s[j] == ']' && name.starts_with("num-") && name.size() > 4) {
      out.push_back({i, j + 1, std::move(name)});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

struct UnmaskResult {
  std::string text;
  std::vector<std::string> dropped;  // names of placeholders absent from the decoded text

  bool value_loss() const { return !dropped.empty(); }
};

// Restores raw numerals into `decoded`. Throws UnknownPlaceholder when the
// decoded text names a placeholder that `m` does not hold.
inline UnmaskResult unmask(const MaskedSentence& m, std::string_view decoded) {
  UnmaskResult r;
  std::vector<bool> seen(m.placeholders.size(), false);
  std::size_t pos = 0;
  for (const auto& occ : find_placeholders(decoded)) {
    const Placeholder* p = m.find(occ.name);
    if (p == nullptr) throw UnknownPlaceholder(occ.name);
    seen[static_cast<std::size_t>(p - m.placeholders.data())] = true;
    r.text.append(decoded.substr(pos, occ.begin - pos));
    r.text += p->raw;
    pos = occ.end;
  }
  r.text.append(decoded.substr(pos));
  for (std::size_t k = 0; k < m.placeholders.size(); ++k)
    if (!seen[k]) r.dropped.push_back(m.placeholders[k].name);
  return r;
}

}  // namespace ectsum
