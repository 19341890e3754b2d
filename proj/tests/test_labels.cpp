#include <gtest/gtest.h>

#include <cmath>

#include "ectsum/encoder.hpp"
#include "ectsum/labels.hpp"
#include "support.hpp"

namespace ectsum {
namespace {

// ---- encoder ----

TEST(LexicalEncoder, IdfAndNormalization) {
  std::vector<std::vector<std::string>> docs = {{"revenue", "grew"}, {"revenue", "fell"}, {"margin", "grew"}};
  auto m = fit_lexical(docs, 1024);
  EXPECT_EQ(m.dim, 1024u);
  EXPECT_DOUBLE_EQ(m.idf[m.bucket("revenue")], std::log(1.0 + 3.0 / 3.0));
  EXPECT_DOUBLE_EQ(m.idf[m.bucket("fell")], std::log(1.0 + 3.0 / 2.0));
  auto v = encode(std::vector<std::string>{"revenue", "fell"}, m);
  EXPECT_NEAR(v.norm, 1.0, 1e-12);
  EXPECT_TRUE(encode(std::vector<std::string>{"the", "and"}, m).is_zero());
  EXPECT_DOUBLE_EQ(cosine(v, v), 1.0);
  EXPECT_DOUBLE_EQ(cosine(v, SentenceVec(std::vector<double>(1024, 0.0))), 0.0);
}

TEST(LexicalEncoder, ProjectionKeepsSimilarityStructure) {
  auto pairs = testing::fixture_pairs();
  auto full = testing::fit_encoder(pairs, 4096, 0);
  auto proj = testing::fit_encoder(pairs, 4096, 256);
  EXPECT_EQ(proj.dimension(), 256u);
  const auto& s = pairs[0].transcript.sentences;
  auto a = proj.embed("a", s[1]), b = proj.embed("b", s[1]);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NEAR(a.norm, 1.0, 1e-12);
  // Identical sentences stay identical; unrelated ones stay far apart.
  EXPECT_NEAR(cosine(full.embed("", s[1]), full.embed("", s[1])), 1.0, 1e-12);
}

TEST(LexicalEncoder, SerializeRoundTripAndRejectsGarbage) {
  auto m = testing::fit_encoder(testing::fixture_pairs(), 512, 64).model();
  auto back = LexicalModel::deserialize(m.serialize());
  EXPECT_EQ(back.idf, m.idf);
  EXPECT_EQ(back.dim, 64u);
  EXPECT_THROW(LexicalModel::deserialize("nope"), FormatError);
  auto bytes = m.serialize();
  EXPECT_THROW(LexicalModel::deserialize(bytes + "x"), FormatError);
  EXPECT_THROW(fit_lexical({}, 512), ConfigError);
  EXPECT_THROW(fit_lexical({{"a"}}, 8), ConfigError);
}

TEST(PrecomputedEmbeddings, BinaryAndJsonLines) {
  testing::TempDir dir("emb");
  std::map<std::string, std::vector<double>> v = {{"p#d0", {1, 0, 0}}, {"p#d1", {0, 0.5, 0}}};
  write_file(dir.path() / "e.bin", serialize_embeddings_binary(v));
  auto bin = load_precomputed(dir.path() / "e.bin");
  EXPECT_EQ(bin.dimension(), 3u);
  EXPECT_EQ(bin.embed("p#d1", make_sentence("x")).values, v["p#d1"]);
  EXPECT_THROW(bin.embed("missing", make_sentence("x")), MissingEmbedding);

  write_file(dir.path() / "e.jsonl",
             "{\"sentence_id\":\"a\",\"vector\":[1,2]}\n{\"sentence_id\":\"b\",\"vector\":[3,4]}\n");
  EXPECT_EQ(load_precomputed(dir.path() / "e.jsonl").size(), 2u);
  write_file(dir.path() / "bad.jsonl",
             "{\"sentence_id\":\"a\",\"vector\":[1,2]}\n{\"sentence_id\":\"b\",\"vector\":[3]}\n");
  EXPECT_THROW(load_precomputed(dir.path() / "bad.jsonl"), FormatError);
}

// ---- labels ----

DocumentSummaryPair make_pair(std::vector<std::string> doc, std::vector<std::string> bullets) {
  DocumentSummaryPair p;
  p.pair_id = "P";
  for (auto& s : doc) p.transcript.sentences.push_back(make_sentence(s, p.transcript.sentences.size()));
  for (auto& b : bullets) p.summary.bullets.push_back(make_sentence(b, p.summary.bullets.size()));
  return p;
}

TEST(Labels, NumericMatchUsesKeyMultisets) {
  auto p = make_pair({"Revenue was $2.74 billion, up 9%.", "We grew 9% overall.", "Costs were $2,740 million and 9% and 4%.",
                      "Nothing numeric here."},
                     {"q2 revenue $2.74 billion, up 9 percent."});
  auto enc = testing::fit_encoder({p}, 256);
  auto ls = build_labels(p, enc);
  EXPECT_EQ(ls.labels, (std::vector<int>{1, 0, 1, 0}));
  ASSERT_EQ(ls.alignments.size(), 1u);
  EXPECT_EQ(ls.alignments[0].kind, MatchKind::kNumeric);
  EXPECT_EQ(ls.alignments[0].doc_indices, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(ls.positives(), 2u);
}

TEST(Labels, RepeatedValuesNeedRepeatedOccurrences) {
  EXPECT_TRUE(multiset_contains(key_multiset("5% and 5% and 7"), key_multiset("5 percent, 5%")));
  EXPECT_FALSE(multiset_contains(key_multiset("5% and 7"), key_multiset("5 percent, 5%")));
}

TEST(Labels, SimilarityFallbackForNumeralFreeTargets) {
  auto p = make_pair({"Revenue grew 5%.", "Margins improved across every segment.", "Thank you all."},
                     {"margins improved across all segments.", "sees revenue up 11%."});
  auto enc = testing::fit_encoder({p}, 512);
  auto ls = build_labels(p, enc);
  ASSERT_EQ(ls.alignments.size(), 2u);
  EXPECT_EQ(ls.alignments[0].kind, MatchKind::kSimilarity);
  EXPECT_EQ(ls.alignments[0].doc_indices, std::vector<std::size_t>{1});
  // A numeral bullet with no containing sentence also falls back.
  EXPECT_EQ(ls.alignments[1].kind, MatchKind::kSimilarity);
  EXPECT_EQ(ls.alignments[1].doc_indices.size(), 1u);
}

TEST(Labels, FallbackTieKeepsSmallestIndexAndFailsOnZeroDocument) {
  SentenceVec t(std::vector<double>{1, 0});
  std::vector<SentenceVec> docs = {SentenceVec(std::vector<double>{0, 0}), SentenceVec(std::vector<double>{0, 1}),
                                   SentenceVec(std::vector<double>{0, 2})};
  EXPECT_EQ(similarity_fallback(t, docs), 1u);
  std::vector<SentenceVec> zeros(3, SentenceVec(std::vector<double>{0, 0}));
  EXPECT_THROW(similarity_fallback(t, zeros), FallbackFailed);
}

TEST(Labels, JsonRoundTrip) {
  auto pairs = testing::fixture_pairs();
  auto enc = testing::fit_encoder(pairs);
  for (const auto& p : pairs) {
    auto ls = build_labels(p, enc);
    auto j = to_json(ls, p.pair_id);
    EXPECT_EQ(j["labels"].get<std::string>().size(), p.transcript.sentences.size());
    auto back = labels_from_json(j);
    EXPECT_EQ(back.labels, ls.labels);
    ASSERT_EQ(back.alignments.size(), ls.alignments.size());
    for (std::size_t k = 0; k < ls.alignments.size(); ++k) {
      EXPECT_EQ(back.alignments[k].doc_indices, ls.alignments[k].doc_indices);
      EXPECT_EQ(back.alignments[k].kind, ls.alignments[k].kind);
    }
    EXPECT_GE(ls.positives(), 1u);
  }
}

TEST(ParaphrasePairs, TargetsReuseSourcePlaceholders) {
  auto p = make_pair({"Revenue rose 27 percent to $667 million in the quarter.", "Thanks everyone."},
                     {"q2 revenue rose 27 percent to $667 million."});
  auto enc = testing::fit_encoder({p}, 256);
  auto ls = build_labels(p, enc);
  auto built = build_paraphrase_pairs(p, ls);
  ASSERT_EQ(built.pairs.size(), 1u);
  EXPECT_TRUE(built.warnings.empty());
  const auto& pp = built.pairs[0];
  EXPECT_EQ(pp.pair_id, "P:t0:d0");
  EXPECT_EQ(pp.source.masked_text, "Revenue rose [num-one] to [num-two] in the quarter.");
  EXPECT_EQ(pp.target.masked_text, "q2 revenue rose [num-one] to [num-two].");
  auto j = to_json(pp);
  EXPECT_EQ(j["source_placeholders"]["num-two"], "$667 million");
  EXPECT_EQ(j["kind"], "numeric");
}

TEST(ParaphrasePairs, FixtureNumericPairsAreContained) {
  auto pairs = testing::fixture_pairs();
  auto enc = testing::fit_encoder(pairs);
  for (const auto& p : pairs) {
    auto built = build_paraphrase_pairs(p, build_labels(p, enc));
    for (const auto& pp : built.pairs) {
      if (pp.kind != MatchKind::kNumeric) continue;
      for (const auto& ph : pp.target.placeholders) {
        const auto* src = pp.source.find(ph.name);
        ASSERT_NE(src, nullptr) << pp.pair_id;
        EXPECT_EQ(src->key, ph.key);
      }
    }
  }
}

}  // namespace
}  // namespace ectsum
