#include <gtest/gtest.h>

#include <set>

#include "ectsum/corpus.hpp"
#include "support.hpp"

namespace ectsum {
namespace {

RawTranscript raw(std::vector<TranscriptBlock> blocks, std::string id = "T1") {
  return {id, "ACME", parse_iso_date("2021-05-04"), std::move(blocks)};
}

TEST(Dates, ParseFormatAndDistance) {
  auto d = parse_iso_date("2021-02-28");
  EXPECT_EQ(format_iso_date(d), "2021-02-28");
  EXPECT_EQ(days_between(d, parse_iso_date("2021-03-01")), 1);
  EXPECT_THROW(parse_iso_date("2021-02-30"), FormatError);
  EXPECT_THROW(parse_iso_date("21-2-3"), FormatError);
}

TEST(CleanTranscript, KeepsPreparedRemarksOnly) {
  auto r = clean_transcript(raw({
      {"Operator", "Welcome to the call.", "", ""},
      {"CEO", "Revenue grew 5%. Margins held.", "", ""},
      {"Operator", "We will now begin the question-and-answer session.", "", ""},
      {"Analyst", "What about pricing?", "", ""},
  }));
  auto* t = std::get_if<Transcript>(&r);
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->sentences.size(), 2u);
  EXPECT_EQ(t->sentences[0].text, "Revenue grew 5%.");
  EXPECT_EQ(t->sentences[1].index, 1u);
}

TEST(CleanTranscript, SectionTagAndHeadingMarkTheBoundary) {
  auto tagged = clean_transcript(raw({{"CFO", "One. Two.", "", "prepared"}, {"Analyst", "Q?", "", "q&a"}}));
  EXPECT_EQ(std::get<Transcript>(tagged).sentences.size(), 2u);
  auto headed = clean_transcript(
      raw({{"CFO", "One.", "", ""}, {"Analyst", "Q?", "Questions and Answers", ""}}));
  EXPECT_EQ(std::get<Transcript>(headed).sentences.size(), 1u);
}

TEST(CleanTranscript, OperatorWithoutCueDoesNotEndRemarks) {
  auto r = clean_transcript(raw({
      {"CEO", "First part.", "", ""},
      {"Operator", "Please hold.", "", ""},
      {"CFO", "Second part.", "", ""},
  }));
  auto& t = std::get<Transcript>(r);
  ASSERT_EQ(t.sentences.size(), 3u);
}

TEST(CleanTranscript, RejectsQaOnlyRecords) {
  auto r = clean_transcript(raw({
      {"Operator", "We will now open the line for questions.", "", ""},
      {"Analyst", "Hello?", "", "qa"},
  }));
  ASSERT_TRUE(std::holds_alternative<Rejected>(r));
  EXPECT_EQ(std::get<Rejected>(r).source_id, "T1");
  EXPECT_TRUE(std::holds_alternative<Rejected>(clean_transcript(raw({}))));
}

TEST(CleanSummary, StripsMarkersEstimatesAndDuplicates) {
  RawArticle a{"A1", "ACME", parse_iso_date("2021-05-04"),
               "BRIEF-Acme results\n* q1 revenue $10 million.\n- q1 revenue $10 million.\n"
               "\xE2\x80\xA2 sees fy eps $2.\n* q1 eps view $0.50 -- Refinitiv IBES data.\n\n"};
  auto s = clean_summary(a);
  ASSERT_EQ(s.bullets.size(), 3u);
  EXPECT_EQ(s.bullets[0].text, "BRIEF-Acme results");
  EXPECT_EQ(s.bullets[1].text, "q1 revenue $10 million.");
  EXPECT_EQ(s.bullets[2].text, "sees fy eps $2.");
  EXPECT_EQ(s.bullets[2].index, 2u);
}

Transcript transcript(std::string id, std::string code, std::string date) {
  return {std::move(code), parse_iso_date(date), {make_sentence("Revenue grew.")}, std::move(id)};
}

SummaryArticle article(std::string id, std::string code, std::string date,
                       std::vector<std::string> bullets) {
  SummaryArticle a{std::move(code), parse_iso_date(date), {}, std::move(id)};
  for (auto& b : bullets) a.bullets.push_back(make_sentence(b, a.bullets.size()));
  return a;
}

TEST(PairDocuments, WindowMergeAndOrder) {
  std::vector<Transcript> ts = {transcript("B-1", "BBB", "2021-01-10"), transcript("A-1", "AAA", "2021-01-10"),
                                transcript("C-1", "CCC", "2021-01-10")};
  std::vector<SummaryArticle> as = {
      article("a2", "AAA", "2021-01-11", {"second.", "shared."}),
      article("a1", "AAA", "2021-01-10", {"first.", "shared."}),
      article("b-late", "BBB", "2021-01-12", {"late."}),
      article("b-early", "BBB", "2021-01-09", {"early."}),
      article("c-empty", "CCC", "2021-01-10", {}),
  };
  auto pairs = pair_documents(ts, as);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].pair_id, "A-1");
  EXPECT_EQ(pairs[0].merged_from, (std::vector<std::string>{"a1", "a2"}));
  ASSERT_EQ(pairs[0].summary.bullets.size(), 3u);
  EXPECT_EQ(pairs[0].summary.bullets[2].text, "second.");
  EXPECT_EQ(pairs[0].summary.source_id, "a1+a2");
  EXPECT_TRUE(validate_pairs(pairs, as).empty());

  auto capped = pair_documents(ts, as, 1);
  EXPECT_EQ(capped[0].merged_from, std::vector<std::string>{"a1"});
}

TEST(PairDocuments, DuplicateEventIsAmbiguous) {
  std::vector<Transcript> ts = {transcript("X-2", "AAA", "2021-01-10"), transcript("X-1", "AAA", "2021-01-10")};
  try {
    pair_documents(ts, {});
    FAIL() << "expected AmbiguousEvent";
  } catch (const AmbiguousEvent& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::string>{"X-1", "X-2"}));
  }
}

TEST(ValidatePairs, FlagsTamperedPairs) {
  std::vector<SummaryArticle> as = {article("a1", "AAA", "2021-01-10", {"x."})};
  auto pairs = pair_documents({transcript("A-1", "AAA", "2021-01-10")}, as);
  pairs[0].summary.company_code = "ZZZ";
  pairs[0].merged_from.push_back("ghost");
  pairs[0].summary.bullets.push_back(pairs[0].summary.bullets[0]);
  EXPECT_EQ(validate_pairs(pairs, as).size(), 3u);
}

TEST(SplitCorpus, SizesDisjointAndSeeded) {
  std::vector<std::string> ids;
  for (int i = 0; i < 37; ++i) ids.push_back("p" + std::to_string(i));
  auto s = split_corpus(ids, 13);
  EXPECT_EQ(s.validation.size(), 3u);
  EXPECT_EQ(s.test.size(), 7u);
  EXPECT_EQ(s.train.size(), 27u);
  std::set<std::string> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 37u);

  auto shuffled = ids;
  std::reverse(shuffled.begin(), shuffled.end());
  auto again = split_corpus(shuffled, 13);
  EXPECT_EQ(again.train, s.train);
  EXPECT_EQ(again.test, s.test);
  EXPECT_NE(split_corpus(ids, 14).train, s.train);
  EXPECT_THROW(split_corpus({"a", "b"}, 1), SplitTooSmall);
}

TEST(Records, RoundTripThroughJson) {
  auto pairs = testing::fixture_pairs();
  ASSERT_FALSE(pairs.empty());
  for (const auto& p : pairs) {
    auto back = pair_from_json(to_json(p));
    EXPECT_EQ(to_json(back).dump(), to_json(p).dump());
  }
  CorpusSplit s{{"a"}, {"b"}, {"c"}, 9};
  EXPECT_EQ(to_json(split_from_json(to_json(s))).dump(), to_json(s).dump());
}

TEST(Fixture, ExpectedShape) {
  auto pairs = testing::fixture_pairs();
  EXPECT_EQ(pairs.size(), 11u);
  std::vector<SummaryArticle> as;
  for (const auto& j : read_jsonl(testing::fixture_dir() / "articles.jsonl"))
    as.push_back(clean_summary(raw_article_from_json(j)));
  EXPECT_TRUE(validate_pairs(pairs, as).empty());
  bool merged = false;
  for (const auto& p : pairs) {
    merged = merged || p.merged_from.size() > 1;
    EXPECT_FALSE(p.transcript.sentences.empty());
    for (const auto& b : p.summary.bullets) EXPECT_EQ(b.text.find("refinitiv"), std::string::npos);
  }
  EXPECT_TRUE(merged);
}

}  // namespace
}  // namespace ectsum
