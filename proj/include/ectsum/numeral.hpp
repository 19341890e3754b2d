#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ectsum/text.hpp"

namespace ectsum {

enum class NumeralUnit { kPlain, kCurrency, kPercent };

inline std::string_view to_string(NumeralUnit u) {
  switch (u) {
    case NumeralUnit::kCurrency: return "currency";
    case NumeralUnit::kPercent: return "percent";
    case NumeralUnit::kPlain: break;
  }
  return "plain";
}

// A financial value found in text. begin/end are byte offsets into the
// sentence the numeral was extracted from; raw == text.substr(begin, end - begin).
struct Numeral {
  std::string raw;
  double value = 0.0;
  int magnitude = 0;  // 0, 3, 6, 9 or 12
  NumeralUnit unit = NumeralUnit::kPlain;
  std::size_t begin = 0;
  std::size_t end = 0;
};

namespace numeral_detail {

struct Magnitude {
  std::string_view word;
  int exponent;
};

inline constexpr std::array<Magnitude, 4> kMagnitudes = {
    Magnitude{"thousand", 3}, Magnitude{"million", 6}, Magnitude{"billion", 9},
    Magnitude{"trillion", 12}};

inline constexpr std::array<std::string_view, 3> kCurrencySymbols = {
    "$", "\xE2\x82\xAC", "\xC2\xA3"};  // $, euro, pound

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

inline std::size_t currency_at(std::string_view s, std::size_t i) {
  for (auto sym : kCurrencySymbols)
    if (s.substr(i).starts_with(sym)) return sym.size();
  return 0;
}

// Digits preceded by a letter ("Q2", "FY2021") or by "<letter>-" ("COVID-19")
// are codes, not values.
inline bool code_prefixed(std::string_view s, std::size_t i) {
  if (i == 0) return false;
  char prev = s[i - 1];
  if (is_alpha(prev) || prev == '_') return true;
  if (prev == '-' && i >= 2 && is_alpha(s[i - 2])) return true;
  return false;
}

// Letters right after the digits ("2nd", "10x") or "-<letter>" ("10-K").
inline bool code_suffixed(std::string_view s, std::size_t j) {
  if (j >= s.size()) return false;
  if (is_alpha(s[j])) return true;
  if (s[j] == '-' && j + 1 < s.size() && is_alpha(s[j + 1])) return true;
  return false;
}

// Parses one numeral starting exactly at `start`. Returns end offset or 0.
inline std::size_t parse_at(std::string_view s, std::size_t start, Numeral& out) {
  std::size_t i = start;
  bool currency = false;
  if (auto n = currency_at(s, i); n > 0) {
    if (i + n >= s.size() || !is_digit(s[i + n])) return 0;
    currency = true;
    i += n;
  } else {
    if (i >= s.size() || !is_digit(s[i])) return 0;
    if (code_prefixed(s, i)) return 0;
  }
  if (i > 0 && is_digit(s[i - 1])) return 0;

  std::string digits;
  std::size_t j = i;
  while (j < s.size() && is_digit(s[j])) digits += s[j++];
  if (digits.size() <= 3) {
    // thousands groups: ",ddd" not followed by another digit
    while (j + 3 < s.size() && s[j] == ',' && is_digit(s[j + 1]) && is_digit(s[j + 2]) &&
           is_digit(s[j + 3]) && (j + 4 >= s.size() || !is_digit(s[j + 4]))) {
      digits.append(s.substr(j + 1, 3));
      j += 4;
    }
  }
  if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
    digits += '.';
    ++j;
    while (j < s.size() && is_digit(s[j])) digits += s[j++];
  }
  if (code_suffixed(s, j)) return 0;

  NumeralUnit unit = currency ? NumeralUnit::kCurrency : NumeralUnit::kPlain;
  int magnitude = 0;
  if (j < s.size() && s[j] == '%') {
    unit = NumeralUnit::kPercent;
    ++j;
  } else {
    std::size_t k = j;
    while (k < s.size() && s[k] == ' ') ++k;
    if (k > j) {
      std::size_t w = k;
      while (w < s.size() && is_alpha(s[w])) ++w;
      std::string word(s.substr(k, w - k));
      for (auto& c : word) c = text_detail::ascii_lower(c);
      bool bounded = w >= s.size() || !text_detail::is_ascii_alnum(s[w]);
      if (bounded) {
        for (const auto& m : kMagnitudes) {
          if (word == m.word) {
            magnitude = m.exponent;
            j = w;
            break;
          }
        }
        if (magnitude == 0 && word == "percent") {
          unit = NumeralUnit::kPercent;
          j = w;
        }
      }
    }
  }

  double value = 0.0;
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (res.ec != std::errc()) return 0;
  out.raw = std::string(s.substr(start, j - start));
  out.value = value;
  out.magnitude = magnitude;
  out.unit = unit;
  out.begin = start;
  out.end = j;
  return j;
}

}  // namespace numeral_detail

// All maximal, non-overlapping matches of the numeral grammar, ordered by
// start offset:
//   [currency] digits [,ddd]* [.digits] ( "%" | " percent" | " <magnitude>" )?
inline std::vector<Numeral> extract_numerals(std::string_view text) {
  std::vector<Numeral> out;
  std::size_t i = 0;
  while (i < text.size()) {
    Numeral n;
    if (std::size_t end = numeral_detail::parse_at(text, i, n); end > i) {
      out.push_back(std::move(n));
      i = end;
      continue;
    }
    // skip the rest of a rejected digit run so no match starts inside it
    if (numeral_detail::is_digit(text[i])) {
      auto inside = [&](std::size_t k) {
        if (numeral_detail::is_digit(text[k])) return true;
        return (text[k] == ',' || text[k] == '.') && k + 1 < text.size() &&
               numeral_detail::is_digit(text[k + 1]);
      };
      while (i < text.size() && inside(i)) ++i;
      continue;
    }
    ++i;
  }
  return out;
}

inline std::vector<Numeral> extract_numerals(const Sentence& s) {
  return extract_numerals(s.text);
}

inline bool has_numerals(std::string_view text) { return !extract_numerals(text).empty(); }

// Decimal string of value * 10^magnitude, no exponent, no trailing zeros:
// (2.74, 9) -> "2740000000", (1.520, 0) -> "1.52". The unit is not part of
// the key.
inline std::string canonical_key(double value, int magnitude) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                           std::chars_format::scientific);
  std::string_view sci(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
  bool negative = false;
  if (!sci.empty() && sci.front() == '-') {
    negative = true;
    sci.remove_prefix(1);
  }
  std::size_t e = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e))
    if (c != '.') digits += c;
  int exponent = 0;
  std::string_view exp_str = sci.substr(e + 1);
  if (!exp_str.empty() && exp_str.front() == '+') exp_str.remove_prefix(1);
  std::from_chars(exp_str.data(), exp_str.data() + exp_str.size(), exponent);

  long point = 1L + exponent + magnitude;  // digits before the decimal point
  std::string out;
  if (point <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
  } else if (static_cast<std::size_t>(point) >= digits.size()) {
    out = digits + std::string(static_cast<std::size_t>(point) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<std::size_t>(point)) + "." +
          digits.substr(static_cast<std::size_t>(point));
  }
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return negative ? "-" + out : out;
}

inline std::string canonical_key(const Numeral& n) { return canonical_key(n.value, n.magnitude); }

inline std::vector<std::string> numeral_keys(std::string_view text) {
  std::vector<std::string> keys;
  for (const auto& n : extract_numerals(text)) keys.push_back(canonical_key(n));
  return keys;
}

}  // namespace ectsum
