#include <gtest/gtest.h>

#include <numeric>

#include "ectsum/stats.hpp"
#include "support.hpp"

namespace ectsum {
namespace {

std::vector<std::string> toks(std::initializer_list<const char*> w) { return {w.begin(), w.end()}; }

// Enumerates every (summary start, doc start) alignment and measures each
// common run directly; no indexing structure is shared with the library.
FragmentSet oracle_fragments(const std::vector<std::string>& doc, const std::vector<std::string>& sum) {
  FragmentSet f;
  f.summary_len = sum.size();
  f.doc_len = doc.size();
  std::size_t i = 0;
  while (i < sum.size()) {
    std::size_t best = 0, best_j = 0;
    for (std::size_t j = 0; j < doc.size(); ++j) {
      std::size_t len = 0;
      for (std::size_t k = 0; i + k < sum.size() && j + k < doc.size(); ++k) {
        if (sum[i + k] != doc[j + k]) break;
        len = k + 1;
      }
      if (len > best) {
        best = len;
        best_j = j;
      }
    }
    if (best == 0) {
      ++i;
    } else {
      f.fragments.push_back({best_j, i, best});
      i += best;
    }
  }
  return f;
}

std::vector<std::string> random_tokens(Rng& rng, std::size_t n, std::size_t vocab) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(rng.below(vocab)));
  return out;
}

TEST(Fragments, VerbatimSpan) {
  std::vector<std::string> doc;
  for (int i = 0; i < 30; ++i) doc.push_back("t" + std::to_string(i));
  std::vector<std::string> sum(doc.begin() + 7, doc.begin() + 17);
  auto f = extract_fragments(doc, sum);
  ASSERT_EQ(f.fragments.size(), 1u);
  EXPECT_EQ(f.fragments[0], (Fragment{7, 0, 10}));
  EXPECT_DOUBLE_EQ(*coverage(f), 1.0);
  EXPECT_DOUBLE_EQ(*density(f), 10.0);
}

TEST(Fragments, NoOverlapAndEmptySummary) {
  auto f = extract_fragments(toks({"a", "b"}), toks({"c", "d", "e"}));
  EXPECT_TRUE(f.fragments.empty());
  EXPECT_DOUBLE_EQ(*coverage(f), 0.0);
  EXPECT_DOUBLE_EQ(*density(f), 0.0);
  auto e = extract_fragments(toks({"a"}), {});
  EXPECT_FALSE(coverage(e).has_value());
  EXPECT_FALSE(density(e).has_value());
}

TEST(Fragments, TiesPreferSmallestDocStart) {
  auto f = extract_fragments(toks({"x", "a", "b", "y", "a", "b", "c"}), toks({"a", "b", "z", "a", "b", "c"}));
  ASSERT_EQ(f.fragments.size(), 2u);
  EXPECT_EQ(f.fragments[0], (Fragment{1, 0, 2}));
  EXPECT_EQ(f.fragments[1], (Fragment{4, 3, 3}));
}

TEST(Fragments, ArithmeticExample) {
  FragmentSet f{{{0, 0, 2}, {5, 4, 3}}, 10, 20};
  EXPECT_DOUBLE_EQ(*coverage(f), 0.5);
  EXPECT_DOUBLE_EQ(*density(f), 1.3);
}

TEST(Fragments, MatchesBruteForceOracle) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t vocab = 2 + rng.below(12);
    auto doc = random_tokens(rng, rng.below(200), vocab);
    auto sum = random_tokens(rng, rng.below(60), vocab);
    auto got = extract_fragments(doc, sum);
    auto want = oracle_fragments(doc, sum);
    ASSERT_EQ(got.fragments, want.fragments) << "trial " << trial;

    // Tiling: fragments are disjoint, ordered and in range.
    std::size_t next = 0;
    for (const auto& fr : got.fragments) {
      EXPECT_GE(fr.summary_start, next);
      EXPECT_LE(fr.doc_start + fr.length, doc.size());
      next = fr.summary_start + fr.length;
    }
    EXPECT_LE(next, sum.size());
    if (auto c = coverage(got)) {
      EXPECT_GE(*c, 0.0);
      EXPECT_LE(*c, 1.0);
      EXPECT_GE(*density(got), *c);
    }
  }
}

TEST(Compression, MeanOfRatios) {
  EXPECT_DOUBLE_EQ(compression({{200, 50}}).value, 4.0);
  auto r = compression({{100, 10}, {2000, 10}, {50, 0}});
  EXPECT_DOUBLE_EQ(r.value, 105.0);
  EXPECT_EQ(r.used, 2u);
  EXPECT_EQ(r.excluded, 1u);
}

// The mean of ratios is not bounded below by the ratio of means: it depends
// on how document and summary lengths co-vary.
TEST(Compression, NotOrderedAgainstRatioOfMeans) {
  auto above = compression({{10, 1}, {10, 100}}).value;     // 5.05 vs 20/101
  auto below = compression({{1, 1}, {100, 10}}).value;      // 5.5 vs 101/11
  EXPECT_GT(above, 20.0 / 101.0);
  EXPECT_LT(below, 101.0 / 11.0);
}

TEST(Quartiles, SegmentBoundsSpreadRemainderEarly) {
  EXPECT_EQ(segment_bounds(10), (std::array<std::size_t, 5>{0, 3, 6, 8, 10}));
  EXPECT_EQ(segment_bounds(3), (std::array<std::size_t, 5>{0, 1, 2, 3, 3}));
}

TEST(Quartiles, SymmetricAndConcentrated) {
  auto even = salient_unigram_distribution(toks({"alpha", "x", "beta", "x", "gamma", "x", "delta", "x"}),
                                           toks({"alpha", "beta", "gamma", "delta", "the"}));
  ASSERT_TRUE(even);
  for (double s : *even) EXPECT_DOUBLE_EQ(s, 0.25);
  auto first = salient_unigram_distribution(toks({"alpha", "alpha", "x", "x", "x", "x", "x", "x"}),
                                            toks({"alpha"}));
  EXPECT_EQ(*first, (QuartileShares{1, 0, 0, 0}));
  EXPECT_FALSE(salient_unigram_distribution(toks({"x", "the"}), toks({"the", "zeta"})));
}

TEST(CorpusStats, FixtureInvariants) {
  auto stats = corpus_stats(testing::fixture_pairs());
  EXPECT_EQ(stats.n_docs, 11u);
  EXPECT_GE(stats.coverage, 0.0);
  EXPECT_LE(stats.coverage, 1.0);
  EXPECT_GE(stats.density, stats.coverage);
  EXPECT_GT(stats.compression, 0.0);
  double total = std::accumulate(stats.quartile_shares.begin(), stats.quartile_shares.end(), 0.0);
  EXPECT_NEAR(total, 1.0, 1e-9);
  for (const auto& p : stats.per_pair) {
    ASSERT_TRUE(p.quartiles);
    EXPECT_NEAR(std::accumulate(p.quartiles->begin(), p.quartiles->end(), 0.0), 1.0, 1e-9);
  }
}

TEST(CorpusStats, EmptySummariesAreExcluded) {
  auto pairs = testing::fixture_pairs();
  pairs[0].summary.bullets.clear();
  auto stats = corpus_stats(pairs);
  EXPECT_EQ(stats.undefined_fragment_pairs, 1u);
  EXPECT_EQ(stats.undefined_quartile_pairs, 1u);
  EXPECT_EQ(stats.n_docs, pairs.size());
}

TEST(ReleaseLayout, LoadsSplitDirectories) {
  testing::TempDir dir("release");
  for (const char* split : {"train", "test"}) {
    std::filesystem::create_directories(dir.path() / split / "ects");
    std::filesystem::create_directories(dir.path() / split / "gt_summaries");
  }
  write_file(dir.path() / "train/ects/a.txt", "Revenue rose 5%. Costs fell.\n\nWe are pleased.\n");
  write_file(dir.path() / "train/gt_summaries/a.txt", "revenue up 5%\ncosts down\n");
  write_file(dir.path() / "test/ects/b.txt", "Sales were flat.\n");
  write_file(dir.path() / "test/gt_summaries/b.txt", "sales flat\n");
  write_file(dir.path() / "test/ects/orphan.txt", "No summary here.\n");
  auto pairs = load_release_pairs(dir.path());
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].pair_id, "train/a");
  EXPECT_EQ(pairs[0].transcript.sentences.size(), 3u);
  EXPECT_EQ(pairs[0].summary.bullets.size(), 2u);
  EXPECT_EQ(pairs[1].pair_id, "test/b");
  EXPECT_THROW(load_release_pairs(dir.path() / "nothing"), MissingInput);
}

}  // namespace
}  // namespace ectsum
