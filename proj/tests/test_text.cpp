#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "ectsum/masking.hpp"
#include "ectsum/numeral.hpp"
#include "ectsum/rng.hpp"
#include "ectsum/text.hpp"
#include "support.hpp"

namespace ectsum {
namespace {

using testing::pick;

TEST(Tokenize, LowercasesAndDropsWrappingPunctuation) {
  EXPECT_EQ(tokenize("Revenue rose 27% to $667 million."),
            (std::vector<std::string>{"revenue", "rose", "27%", "to", "$667", "million"}));
  EXPECT_EQ(tokenize("  (\"Hello,\" she said) -- ok!  "),
            (std::vector<std::string>{"hello", "she", "said", "ok"}));
  EXPECT_EQ(tokenize("1,520 units; $2.74"), (std::vector<std::string>{"1,520", "units", "$2.74"}));
  EXPECT_TRUE(tokenize("... -- !!").empty());
}

TEST(Tokenize, KeepsNonAsciiContent) {
  auto t = tokenize("\xE2\x80\x9C" "Caf\xC3\xA9\xE2\x80\x9D opened");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], "caf\xC3\xA9");
}

TEST(SplitSentences, BasicCases) {
  auto s = split_sentences("Revenue was $3.5 billion. Mr. Smith joined Acme Inc. in May! Really? Yes.");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].text, "Revenue was $3.5 billion.");
  EXPECT_EQ(s[1].text, "Mr. Smith joined Acme Inc. in May!");
  EXPECT_EQ(s[2].text, "Really?");
  EXPECT_EQ(s[3].text, "Yes.");
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i].index, i);
}

TEST(SplitSentences, ClosersStayWithTheirSentence) {
  auto s = split_sentences("He said \"done.\" Then (briefly.) we left");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].text, "He said \"done.\"");
  EXPECT_EQ(s[1].text, "Then (briefly.)");
  EXPECT_EQ(s[2].text, "we left");
}

TEST(SplitSentences, DropsTokenlessPieces) {
  auto s = split_sentences("... !! Fine. -- .");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].text, "Fine.");
  EXPECT_TRUE(split_sentences("").empty());
  EXPECT_TRUE(split_sentences("   \n\t").empty());
}

// Generative oracle: texts are assembled from sentences whose boundaries
// are known by construction. Inner words may carry abbreviations and
// decimal points; only the last word of each sentence ends in a terminator.
TEST(SplitSentences, RecoversGeneratedBoundaries) {
  const std::vector<std::string> plain = {"revenue", "grew", "Acme",   "the", "quarter",
                                          "margin",  "and",  "outlook", "we",  "delivered"};
  const std::vector<std::string> inner = {"Inc.", "Mr.", "U.S.", "e.g.", "vs.", "3.5", "$2.74", "Q2.", "co."};
  const std::vector<std::string> ends = {".", "?", "!", ".\"", ".)", "?'", "!)"};
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> expected;
    std::string text;
    std::size_t n = 1 + rng.below(5);
    for (std::size_t k = 0; k < n; ++k) {
      std::string sent;
      std::size_t words = 1 + rng.below(7);
      for (std::size_t w = 0; w < words; ++w) {
        if (w) sent += ' ';
        sent += rng.below(4) == 0 ? pick(rng, inner) : pick(rng, plain);
      }
      // A sentence-final abbreviation would legitimately not split.
      sent += ' ' + pick(rng, plain) + pick(rng, ends);
      expected.push_back(sent);
      if (k) text += rng.below(2) ? " " : (rng.below(2) ? "\n" : "   ");
      text += sent;
    }
    auto got = split_sentences(text);
    ASSERT_EQ(got.size(), expected.size()) << text;
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(got[k].text, expected[k]) << text;
  }
}

TEST(Numerals, Grammar) {
  auto n = extract_numerals("Revenue rose 27 percent to $667 million; EPS $3.15 and 1,520 stores, 4.5%.");
  ASSERT_EQ(n.size(), 5u);
  EXPECT_EQ(n[0].raw, "27 percent");
  EXPECT_EQ(n[0].unit, NumeralUnit::kPercent);
  EXPECT_EQ(n[1].raw, "$667 million");
  EXPECT_EQ(n[1].magnitude, 6);
  EXPECT_EQ(n[1].unit, NumeralUnit::kCurrency);
  EXPECT_EQ(n[2].raw, "$3.15");
  EXPECT_EQ(n[3].raw, "1,520");
  EXPECT_DOUBLE_EQ(n[3].value, 1520);
  EXPECT_EQ(n[4].raw, "4.5%");
}

TEST(Numerals, CodesAreNotValues) {
  EXPECT_TRUE(extract_numerals("Q2 and FY2021 under COVID-19 per the 10-K, 2nd item, 3x").empty());
}

TEST(Numerals, OffsetsMatchRaw) {
  std::string s = "From $1.2 billion to 3,400 and 12% more.";
  for (const auto& n : extract_numerals(s)) EXPECT_EQ(s.substr(n.begin, n.end - n.begin), n.raw);
}

TEST(Numerals, MagnitudeBindsAcrossSpacesOnly) {
  auto n = extract_numerals("$12\nmillion");
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0].raw, "$12");
  EXPECT_EQ(extract_numerals("$12   million")[0].magnitude, 6);
}

TEST(CanonicalKey, NormalizesScaleAndZeros) {
  EXPECT_EQ(canonical_key(2.74, 9), "2740000000");
  EXPECT_EQ(canonical_key(1.520, 0), "1.52");
  EXPECT_EQ(canonical_key(13.00, 0), "13");
  EXPECT_EQ(canonical_key(0.05, 0), "0.05");
  EXPECT_EQ(canonical_key(0, 6), "0");
  EXPECT_EQ(canonical_key(2.791, 9), "2791000000");
  EXPECT_EQ(numeral_keys("$2,740 million"), numeral_keys("2.74 billion"));
  EXPECT_NE(numeral_keys("$2.79 billion"), numeral_keys("$2.791 billion"));
}

TEST(Masking, NamesInOrder) {
  auto m = mask_numerals("Sales of $3.5 billion rose 12% from 2020.");
  EXPECT_EQ(m.masked_text, "Sales of [num-one] rose [num-two] from [num-three].");
  ASSERT_EQ(m.placeholders.size(), 3u);
  EXPECT_EQ(m.placeholders[0].raw, "$3.5 billion");
  EXPECT_EQ(m.placeholders[0].key, "3500000000");
  EXPECT_EQ(placeholder_name(20), "num-twenty-one");
}

TEST(Masking, AlignedReusesSourceNames) {
  auto src = mask_numerals("Revenue of $2.74 billion up 9% on 2020.");
  auto tgt = mask_aligned("q2 revenue $2,740 million vs 5%; up 9%.", src);
  EXPECT_EQ(tgt.masked_text, "q2 revenue [num-one] vs [num-four]; up [num-two].");
  EXPECT_EQ(tgt.placeholders[0].raw, "$2,740 million");
  EXPECT_EQ(tgt.placeholders[1].name, "num-four");
}

TEST(Masking, UnmaskReportsDroppedAndRejectsUnknown) {
  auto m = mask_numerals("EPS $1.10 versus $0.95.");
  auto r = unmask(m, "eps [NUM-ONE].");
  EXPECT_EQ(r.text, "eps $1.10.");
  ASSERT_TRUE(r.value_loss());
  EXPECT_EQ(r.dropped, std::vector<std::string>{"num-two"});
  EXPECT_THROW(unmask(m, "eps [num-three]"), UnknownPlaceholder);
  EXPECT_EQ(unmask(m, "[num-two] twice [num-two]").text, "$0.95 twice $0.95");
}

TEST(Masking, FuzzedRoundTrip) {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    std::size_t parts = 1 + rng.below(8);
    for (std::size_t k = 0; k < parts; ++k) {
      switch (rng.below(4)) {
        case 0: s += testing::random_numeral(rng); break;
        case 1: s += pick(rng, testing::filler_words()); break;
        case 2: s += "[note]"; break;
        default: s += std::string(1, "$,.-%( )"[rng.below(8)]); break;
      }
      if (rng.below(3)) s += ' ';
    }
    auto m = mask_numerals(s);
    EXPECT_EQ(unmask(m, m.masked_text).text, s);
    EXPECT_FALSE(unmask(m, m.masked_text).value_loss());
  }
}

}  // namespace
}  // namespace ectsum
