#pragma once

// Pipeline stages over a work directory. Each stage reads and writes only
// its declared files; every output starts with a header whose config holds
// the stage parameters plus content hashes of its inputs, never paths or
// thread counts, so equal inputs give byte-identical outputs.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ectsum/baselines.hpp"
#include "ectsum/corpus.hpp"
#include "ectsum/encoder.hpp"
#include "ectsum/extractor.hpp"
#include "ectsum/labels.hpp"
#include "ectsum/metrics.hpp"
#include "ectsum/parallel.hpp"
#include "ectsum/paraphraser.hpp"
#include "ectsum/records.hpp"
#include "ectsum/stats.hpp"

namespace ectsum {

namespace fs = std::filesystem;

namespace artifacts {
inline constexpr const char* kTranscripts = "transcripts.jsonl";
inline constexpr const char* kArticles = "articles.jsonl";
inline constexpr const char* kRejected = "rejected.jsonl";
inline constexpr const char* kPairs = "pairs.jsonl";
inline constexpr const char* kSplit = "split.jsonl";
inline constexpr const char* kStats = "stats.jsonl";
inline constexpr const char* kEncoder = "encoder.lex";
inline constexpr const char* kLabels = "labels.jsonl";
inline constexpr const char* kParaphrasePairs = "paraphrase_pairs.jsonl";
inline constexpr const char* kCheckpoint = "extractor.ckpt";
inline constexpr const char* kTrainLog = "train_log.jsonl";
inline constexpr const char* kExtractive = "extractive.jsonl";
inline constexpr const char* kPredictions = "predictions.jsonl";
}  // namespace artifacts

namespace formats {
inline constexpr const char* kTranscripts = "ectsum.transcripts";
inline constexpr const char* kArticles = "ectsum.articles";
inline constexpr const char* kRejected = "ectsum.rejected";
inline constexpr const char* kPairs = "ectsum.pairs";
inline constexpr const char* kSplit = "ectsum.split";
inline constexpr const char* kStats = "ectsum.stats";
inline constexpr const char* kLabels = "ectsum.labels";
inline constexpr const char* kTrainLog = "ectsum.train_log";
inline constexpr const char* kExtractive = "ectsum.extractive";
inline constexpr const char* kPredictions = "ectsum.predictions";
inline constexpr const char* kMetrics = "ectsum.metrics";
}  // namespace formats

struct RunConfig {
  fs::path work_dir = "ectsum-work";
  fs::path transcripts;  // raw ingest inputs
  fs::path articles;
  fs::path release_dir;  // public release layout, used by `stats`
  std::uint64_t seed = 13;
  std::size_t threads = 1;
  std::string encoder = "lexical";  // or "precomputed:<path>"
  std::size_t hash_buckets = 65536;
  std::size_t projection_dim = 256;  // 0 keeps all buckets
  std::size_t word_budget = kDefaultWordBudget;
  std::size_t max_merge = 0;
  std::string eval_split = "test";
  TrainConfig train;
  std::string backend = "rule";  // identity | rule | subprocess:<command>
  fs::path rules;                // optional rule table override
  std::string method = "lexrank";
  fs::path predictions;          // evaluate input; defaults to the paraphrase output

  fs::path at(const char* name) const { return work_dir / name; }
};

// Applies a JSON object of settings. Unknown keys are rejected.
inline void apply_config_json(RunConfig& c, const Json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "work_dir") c.work_dir = v.get<std::string>();
      else if (key == "transcripts") c.transcripts = v.get<std::string>();
      else if (key == "articles") c.articles = v.get<std::string>();
      else if (key == "release_dir") c.release_dir = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "threads") c.threads = v.get<std::size_t>();
      else if (key == "encoder") c.encoder = v.get<std::string>();
      else if (key == "hash_buckets") c.hash_buckets = v.get<std::size_t>();
      else if (key == "projection_dim") c.projection_dim = v.get<std::size_t>();
      else if (key == "word_budget") c.word_budget = v.get<std::size_t>();
      else if (key == "max_merge") c.max_merge = v.get<std::size_t>();
      else if (key == "eval_split") c.eval_split = v.get<std::string>();
      else if (key == "backend") c.backend = v.get<std::string>();
      else if (key == "rules") c.rules = v.get<std::string>();
      else if (key == "method") c.method = v.get<std::string>();
      else if (key == "predictions") c.predictions = v.get<std::string>();
      else if (key == "hidden") c.train.dims.hidden = v.get<std::size_t>();
      else if (key == "position_dim") c.train.dims.position = v.get<std::size_t>();
      else if (key == "max_pos") c.train.dims.max_pos = v.get<std::size_t>();
      else if (key == "learning_rate") c.train.learning_rate = v.get<double>();
      else if (key == "batch_size") c.train.batch_size = v.get<std::size_t>();
      else if (key == "epochs") c.train.max_epochs = v.get<std::size_t>();
      else if (key == "patience") c.train.patience = v.get<std::size_t>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const Json::exception& e) {
      throw ConfigError("bad value for config key '" + key + "': " + e.what());
    }
  }
}

inline RunConfig load_run_config(const fs::path& path) {
  RunConfig c;
  try {
    apply_config_json(c, Json::parse(read_file(path)));
  } catch (const Json::parse_error& e) {
    throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
  }
  return c;
}

// Outcome of one stage, for progress output.
struct StageReport {
  std::string stage;
  std::vector<std::string> lines;
};

namespace pipeline_detail {

inline std::string content_hash(const fs::path& p) { return hex64(fnv1a64(read_file(p))); }

inline void require_file(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw MissingInput(std::string(what) + " not found: " + p.string());
}

inline std::vector<DocumentSummaryPair> read_pairs(const RunConfig& c) {
  require_file(c.at(artifacts::kPairs), "pairs file (run `pair` first)");
  std::vector<DocumentSummaryPair> out;
  for (const auto& r : read_stage_file(c.at(artifacts::kPairs), formats::kPairs).records)
    out.push_back(pair_from_json(r));
  return out;
}

inline CorpusSplit read_split(const RunConfig& c) {
  require_file(c.at(artifacts::kSplit), "split file (run `split` first)");
  auto f = read_stage_file(c.at(artifacts::kSplit), formats::kSplit);
  if (f.records.size() != 1) throw FormatError("split file must hold exactly one record");
  return split_from_json(f.records.front());
}

inline const std::vector<std::string>& split_ids(const CorpusSplit& s, const std::string& name) {
  if (name == "train") return s.train;
  if (name == "validation" || name == "val") return s.validation;
  if (name == "test") return s.test;
  throw ConfigError("unknown split '" + name + "' (train, validation, test)");
}

inline std::vector<const DocumentSummaryPair*> select_pairs(const std::vector<DocumentSummaryPair>& pairs,
                                                            const std::vector<std::string>& ids) {
  std::map<std::string, const DocumentSummaryPair*> by_id;
  for (const auto& p : pairs) by_id[p.pair_id] = &p;
  std::vector<const DocumentSummaryPair*> out;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw FormatError("split names unknown pair '" + id + "'");
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->pair_id < b->pair_id; });
  return out;
}

inline std::map<std::string, LabelSet> read_labels(const RunConfig& c) {
  require_file(c.at(artifacts::kLabels), "labels file (run `labels` first)");
  std::map<std::string, LabelSet> out;
  for (const auto& r : read_stage_file(c.at(artifacts::kLabels), formats::kLabels).records)
    out[require<std::string>(r, "pair_id")] = labels_from_json(r);
  return out;
}

struct LoadedEncoder {
  std::unique_ptr<EmbeddingProvider> provider;
  Json identity;  // describe() plus a content hash of the model or vectors
};

inline bool is_precomputed(const std::string& spec) { return spec.starts_with("precomputed:"); }

inline LoadedEncoder load_encoder(const RunConfig& c) {
  LoadedEncoder e;
  fs::path file;
  if (c.encoder == "lexical") {
    file = c.at(artifacts::kEncoder);
    require_file(file, "lexical encoder (run `labels` first)");
    e.provider = std::make_unique<LexicalEncoder>(LexicalModel::deserialize(read_file(file)));
  } else if (is_precomputed(c.encoder)) {
    file = c.encoder.substr(std::string("precomputed:").size());
    require_file(file, "embedding file");
    e.provider = std::make_unique<PrecomputedEmbeddings>(load_precomputed(file));
  } else {
    throw ConfigError("unknown encoder '" + c.encoder + "' (lexical or precomputed:<path>)");
  }
  e.identity = e.provider->describe();
  e.identity["content_hash"] = content_hash(file);
  return e;
}

inline std::unique_ptr<RewriteBackend> make_backend(const RunConfig& c) {
  if (c.backend == "identity") return std::make_unique<IdentityBackend>();
  if (c.backend == "rule")
    return c.rules.empty() ? std::make_unique<RuleBackend>()
                           : std::make_unique<RuleBackend>(load_rule_table(c.rules));
  if (c.backend.starts_with("subprocess:"))
    return std::make_unique<SubprocessBackend>(c.backend.substr(std::string("subprocess:").size()));
  throw ConfigError("unknown backend '" + c.backend + "' (identity, rule, subprocess:<command>)");
}

inline Json stage_config(const char* stage) {
  Json j;
  j["stage"] = stage;
  return j;
}

inline std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += '\n';
    out += s;
  }
  return out;
}

inline Json prediction_record(const DocumentSummaryPair& p, const std::vector<std::size_t>& idx) {
  Json j;
  j["pair_id"] = p.pair_id;
  j["indices"] = idx;
  std::vector<std::string> texts;
  for (auto i : idx) texts.push_back(p.transcript.sentences.at(i).text);
  j["summary_text"] = join_lines(texts);
  return j;
}

inline std::string describe_count(std::size_t n, const char* what, const fs::path& file) {
  return std::to_string(n) + " " + what + " -> " + file.filename().string();
}

}  // namespace pipeline_detail

// ---- stages ----

inline StageReport run_ingest(const RunConfig& c) {
  using namespace pipeline_detail;
  if (c.transcripts.empty() || c.articles.empty())
    throw ConfigError("ingest needs raw transcript and article files");
  require_file(c.transcripts, "raw transcripts");
  require_file(c.articles, "raw articles");

  std::vector<Transcript> kept;
  std::vector<Rejected> rejected;
  for (const auto& r : read_jsonl(c.transcripts)) {
    auto res = clean_transcript(raw_transcript_from_json(r));
    if (auto* t = std::get_if<Transcript>(&res))
      kept.push_back(std::move(*t));
    else
      rejected.push_back(std::get<Rejected>(res));
  }
  std::vector<SummaryArticle> articles;
  for (const auto& r : read_jsonl(c.articles)) articles.push_back(clean_summary(raw_article_from_json(r)));
  std::sort(kept.begin(), kept.end(), [](auto& a, auto& b) { return a.source_id < b.source_id; });
  std::sort(rejected.begin(), rejected.end(), [](auto& a, auto& b) { return a.source_id < b.source_id; });
  std::sort(articles.begin(), articles.end(), [](auto& a, auto& b) { return a.source_id < b.source_id; });

  Json cfg = stage_config("ingest");
  cfg["inputs"] = {{"transcripts", content_hash(c.transcripts)}, {"articles", content_hash(c.articles)}};
  {
    RecordWriter w(c.at(artifacts::kTranscripts), make_header(formats::kTranscripts, cfg));
    for (const auto& t : kept) w.write(to_json(t));
    w.close();
  }
  {
    RecordWriter w(c.at(artifacts::kArticles), make_header(formats::kArticles, cfg));
    for (const auto& a : articles) w.write(to_json(a));
    w.close();
  }
  {
    RecordWriter w(c.at(artifacts::kRejected), make_header(formats::kRejected, cfg));
    for (const auto& r : rejected) w.write(Json{{"source_id", r.source_id}, {"reason", "no_prepared_remarks"}});
    w.close();
  }
  return {"ingest",
          {describe_count(kept.size(), "transcripts", c.at(artifacts::kTranscripts)),
           describe_count(rejected.size(), "rejected transcripts", c.at(artifacts::kRejected)),
           describe_count(articles.size(), "articles", c.at(artifacts::kArticles))}};
}

inline StageReport run_pair(const RunConfig& c) {
  using namespace pipeline_detail;
  require_file(c.at(artifacts::kTranscripts), "cleaned transcripts (run `ingest` first)");
  require_file(c.at(artifacts::kArticles), "cleaned articles (run `ingest` first)");
  std::vector<Transcript> ts;
  for (const auto& r : read_stage_file(c.at(artifacts::kTranscripts), formats::kTranscripts).records)
    ts.push_back(transcript_from_json(r));
  std::vector<SummaryArticle> arts;
  for (const auto& r : read_stage_file(c.at(artifacts::kArticles), formats::kArticles).records)
    arts.push_back(article_from_json(r));

  auto pairs = pair_documents(ts, arts, c.max_merge);
  if (auto problems = validate_pairs(pairs, arts); !problems.empty())
    throw FormatError("pairing produced invalid pairs: " + problems.front());

  Json cfg = stage_config("pair");
  cfg["max_merge"] = c.max_merge;
  cfg["inputs"] = {{"transcripts", content_hash(c.at(artifacts::kTranscripts))},
                   {"articles", content_hash(c.at(artifacts::kArticles))}};
  RecordWriter w(c.at(artifacts::kPairs), make_header(formats::kPairs, cfg));
  for (const auto& p : pairs) w.write(to_json(p));
  w.close();
  return {"pair", {describe_count(pairs.size(), "pairs", c.at(artifacts::kPairs))}};
}

inline StageReport run_split(const RunConfig& c) {
  using namespace pipeline_detail;
  auto pairs = read_pairs(c);
  std::vector<std::string> ids;
  for (const auto& p : pairs) ids.push_back(p.pair_id);
  auto split = split_corpus(ids, c.seed);
  Json cfg = stage_config("split");
  cfg["seed"] = c.seed;
  cfg["inputs"] = {{"pairs", content_hash(c.at(artifacts::kPairs))}};
  RecordWriter w(c.at(artifacts::kSplit), make_header(formats::kSplit, cfg));
  w.write(to_json(split));
  w.close();
  return {"split",
          {std::to_string(split.train.size()) + "/" + std::to_string(split.validation.size()) + "/" +
           std::to_string(split.test.size()) + " train/validation/test -> " + artifacts::kSplit}};
}

inline Json to_json(const PairStats& s) {
  Json j;
  j["pair_id"] = s.pair_id;
  j["doc_tokens"] = s.doc_tokens;
  j["summary_tokens"] = s.summary_tokens;
  j["coverage"] = optional_json(s.coverage);
  j["density"] = optional_json(s.density);
  j["quartiles"] = s.quartiles ? Json(*s.quartiles) : Json(nullptr);
  return j;
}

inline Json corpus_json(const CorpusStats& s) {
  Json j;
  j["corpus"] = true;
  j["n_docs"] = s.n_docs;
  j["coverage"] = s.coverage;
  j["density"] = s.density;
  j["compression"] = s.compression;
  j["mean_doc_tokens"] = s.mean_doc_tokens;
  j["mean_summary_tokens"] = s.mean_summary_tokens;
  j["quartile_shares"] = s.quartile_shares;
  j["undefined_fragment_pairs"] = s.undefined_fragment_pairs;
  j["undefined_quartile_pairs"] = s.undefined_quartile_pairs;
  return j;
}

// Statistics over the work-directory pairs, or over a public release
// directory when one is configured.
inline CorpusStats compute_stats(const RunConfig& c, Json& inputs) {
  using namespace pipeline_detail;
  std::vector<DocumentSummaryPair> pairs;
  if (!c.release_dir.empty()) {
    pairs = load_release_pairs(c.release_dir);
    inputs["release_pairs"] = pairs.size();
  } else {
    pairs = read_pairs(c);
    inputs["pairs"] = content_hash(c.at(artifacts::kPairs));
  }
  auto per = parallel_map(pairs.size(), c.threads, [&](std::size_t i) { return pair_stats(pairs[i]); });
  return aggregate_stats(std::move(per));
}

inline StageReport run_stats(const RunConfig& c) {
  Json inputs = Json::object();
  auto s = compute_stats(c, inputs);
  Json cfg = pipeline_detail::stage_config("stats");
  cfg["inputs"] = inputs;
  RecordWriter w(c.at(artifacts::kStats), make_header(formats::kStats, cfg));
  for (const auto& p : s.per_pair) w.write(to_json(p));
  Json corpus = corpus_json(s);
  w.write(corpus);
  w.close();
  char buf[256];
  std::snprintf(buf, sizeof buf, "n_docs %zu  coverage %.4f  density %.4f  compression %.2f  summary tokens %.2f",
                s.n_docs, s.coverage, s.density, s.compression, s.mean_summary_tokens);
  return {"stats", {buf, std::string("per-pair and corpus records -> ") + artifacts::kStats}};
}

inline StageReport run_labels(const RunConfig& c) {
  using namespace pipeline_detail;
  auto pairs = read_pairs(c);
  auto split = read_split(c);
  if (c.encoder == "lexical") {
    std::vector<std::vector<std::string>> docs;
    for (const auto* p : select_pairs(pairs, split.train)) {
      for (const auto& s : p->transcript.sentences) docs.push_back(s.tokens);
      for (const auto& s : p->summary.bullets) docs.push_back(s.tokens);
    }
    write_file(c.at(artifacts::kEncoder), fit_lexical(docs, c.hash_buckets, c.projection_dim).serialize());
  }
  auto enc = load_encoder(c);

  struct PairLabels {
    LabelSet labels;
    ParaphraseBuild paraphrases;
  };
  auto results = parallel_map(pairs.size(), c.threads, [&](std::size_t i) {
    PairLabels r;
    r.labels = build_labels(pairs[i], *enc.provider);
    r.paraphrases = build_paraphrase_pairs(pairs[i], r.labels);
    return r;
  });

  Json cfg = stage_config("labels");
  cfg["encoder"] = enc.identity;
  cfg["inputs"] = {{"pairs", content_hash(c.at(artifacts::kPairs))},
                   {"split", content_hash(c.at(artifacts::kSplit))}};
  std::size_t positives = 0, fallbacks = 0;
  std::vector<ParaphrasePair> para;
  std::vector<std::string> warnings;
  {
    RecordWriter w(c.at(artifacts::kLabels), make_header(formats::kLabels, cfg));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& r = results[i];
      w.write(to_json(r.labels, pairs[i].pair_id));
      positives += r.labels.positives();
      for (const auto& a : r.labels.alignments) fallbacks += a.kind == MatchKind::kSimilarity;
      para.insert(para.end(), r.paraphrases.pairs.begin(), r.paraphrases.pairs.end());
      warnings.insert(warnings.end(), r.paraphrases.warnings.begin(), r.paraphrases.warnings.end());
    }
    w.close();
  }
  auto n_para = export_backend_training_set(
      std::move(para), c.at(artifacts::kParaphrasePairs),
      make_header(std::string(kParaphrasePairsFormat), cfg));
  StageReport rep{"labels",
                  {describe_count(pairs.size(), "label sets", c.at(artifacts::kLabels)),
                   std::to_string(positives) + " positive sentences, " + std::to_string(fallbacks) +
                       " similarity fallbacks",
                   describe_count(n_para, "paraphrase pairs", c.at(artifacts::kParaphrasePairs))}};
  for (const auto& w : warnings) rep.lines.push_back("warning: " + w);
  return rep;
}

inline std::vector<TrainingDoc> training_docs(const std::vector<const DocumentSummaryPair*>& pairs,
                                              const std::map<std::string, LabelSet>& labels,
                                              const EmbeddingProvider& enc, std::size_t threads) {
  auto docs = parallel_map(pairs.size(), threads, [&](std::size_t i) {
    const auto& p = *pairs[i];
    auto it = labels.find(p.pair_id);
    if (it == labels.end()) throw FormatError("no labels for pair '" + p.pair_id + "'");
    if (it->second.labels.size() != p.transcript.sentences.size())
      throw ShapeError("labels for '" + p.pair_id + "' do not match its sentence count");
    return TrainingDoc{p.pair_id, embed_document(p, enc), numeral_flags(p.transcript.sentences),
                       it->second.labels};
  });
  std::erase_if(docs, [](const TrainingDoc& d) { return d.x.empty(); });
  return docs;
}

inline StageReport run_train(const RunConfig& c) {
  using namespace pipeline_detail;
  auto pairs = read_pairs(c);
  auto split = read_split(c);
  auto labels = read_labels(c);
  auto enc = load_encoder(c);
  TrainConfig tc = c.train;
  tc.dims.input = enc.provider->dimension();
  tc.seed = c.seed;
  tc.threads = c.threads;
  auto train_set = training_docs(select_pairs(pairs, split.train), labels, *enc.provider, c.threads);
  auto val_set = training_docs(select_pairs(pairs, split.validation), labels, *enc.provider, c.threads);
  auto result = train(train_set, val_set, tc);
  save_checkpoint(c.at(artifacts::kCheckpoint), result.params);

  Json cfg = stage_config("train");
  cfg["train"] = tc.to_json();
  cfg["encoder"] = enc.identity;
  cfg["inputs"] = {{"pairs", content_hash(c.at(artifacts::kPairs))},
                   {"split", content_hash(c.at(artifacts::kSplit))},
                   {"labels", content_hash(c.at(artifacts::kLabels))}};
  RecordWriter w(c.at(artifacts::kTrainLog), make_header(formats::kTrainLog, cfg));
  for (const auto& e : result.log) w.write(to_json(e));
  w.close();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu epochs, best epoch %zu with validation loss %.6f", result.log.size(),
                result.best_epoch, result.best_val_loss);
  return {"train", {buf, std::string("checkpoint -> ") + artifacts::kCheckpoint}};
}

inline StageReport run_summarize(const RunConfig& c) {
  using namespace pipeline_detail;
  auto pairs = read_pairs(c);
  auto split = read_split(c);
  require_file(c.at(artifacts::kCheckpoint), "extractor checkpoint (run `train` first)");
  auto params = load_checkpoint(c.at(artifacts::kCheckpoint));
  auto enc = load_encoder(c);
  auto chosen = select_pairs(pairs, split_ids(split, c.eval_split));
  auto records = parallel_map(chosen.size(), c.threads, [&](std::size_t i) {
    const auto& p = *chosen[i];
    auto probs = predict(embed_document(p, *enc.provider), numeral_flags(p.transcript.sentences), params);
    return prediction_record(p, select(probs, p.transcript.sentences, c.word_budget));
  });
  Json cfg = stage_config("summarize");
  cfg["word_budget"] = c.word_budget;
  cfg["split"] = c.eval_split;
  cfg["encoder"] = enc.identity;
  cfg["inputs"] = {{"pairs", content_hash(c.at(artifacts::kPairs))},
                   {"split", content_hash(c.at(artifacts::kSplit))},
                   {"checkpoint", content_hash(c.at(artifacts::kCheckpoint))}};
  RecordWriter w(c.at(artifacts::kExtractive), make_header(formats::kExtractive, cfg));
  for (const auto& r : records) w.write(r);
  w.close();
  return {"summarize", {describe_count(records.size(), "extractive summaries", c.at(artifacts::kExtractive))}};
}

inline StageReport run_paraphrase(const RunConfig& c) {
  using namespace pipeline_detail;
  auto pairs = read_pairs(c);
  std::map<std::string, const DocumentSummaryPair*> by_id;
  for (const auto& p : pairs) by_id[p.pair_id] = &p;
  require_file(c.at(artifacts::kExtractive), "extractive summaries (run `summarize` first)");
  auto extracted = read_stage_file(c.at(artifacts::kExtractive), formats::kExtractive).records;
  auto backend = make_backend(c);

  // One backend batch over every selected sentence, in file order.
  std::vector<Sentence> sentences;
  std::vector<std::size_t> owner;
  for (std::size_t d = 0; d < extracted.size(); ++d) {
    auto id = require<std::string>(extracted[d], "pair_id");
    auto it = by_id.find(id);
    if (it == by_id.end()) throw FormatError("extractive summary names unknown pair '" + id + "'");
    for (auto i : require<std::vector<std::size_t>>(extracted[d], "indices")) {
      sentences.push_back(it->second->transcript.sentences.at(i));
      owner.push_back(d);
    }
  }
  auto outcomes = paraphrase_all(sentences, *backend);

  Json cfg = stage_config("paraphrase");
  cfg["backend"] = backend->describe();
  cfg["inputs"] = {{"pairs", content_hash(c.at(artifacts::kPairs))},
                   {"extractive", content_hash(c.at(artifacts::kExtractive))}};
  RecordWriter w(c.at(artifacts::kPredictions), make_header(formats::kPredictions, cfg));
  std::size_t k = 0, losses = 0;
  for (std::size_t d = 0; d < extracted.size(); ++d) {
    std::vector<std::string> bullets;
    Json lost = Json::array();
    for (; k < outcomes.size() && owner[k] == d; ++k) {
      bullets.push_back(bullet_of(outcomes[k]).text);
      if (auto* v = std::get_if<ValueLoss>(&outcomes[k])) {
        ++losses;
        lost.push_back({{"sentence_index", v->partial.source_sentence_index}, {"dropped", v->dropped_values}});
      }
    }
    Json r;
    r["pair_id"] = extracted[d]["pair_id"];
    r["summary_text"] = join_lines(bullets);
    r["bullets"] = bullets;
    r["value_loss"] = std::move(lost);
    w.write(r);
  }
  w.close();
  return {"paraphrase",
          {describe_count(extracted.size(), "bullet summaries", c.at(artifacts::kPredictions)),
           std::to_string(losses) + " bullets with dropped values"}};
}

inline StageReport run_baseline(const RunConfig& c) {
  using namespace pipeline_detail;
  auto pairs = read_pairs(c);
  auto split = read_split(c);
  auto chosen = select_pairs(pairs, split_ids(split, c.eval_split));
  Json cfg = stage_config("baseline");
  cfg["method"] = c.method;
  cfg["word_budget"] = c.word_budget;
  cfg["split"] = c.eval_split;
  Json inputs = {{"pairs", content_hash(c.at(artifacts::kPairs))}, {"split", content_hash(c.at(artifacts::kSplit))}};

  std::vector<Json> records;
  if (c.method == "lead") {
    records = parallel_map(chosen.size(), c.threads, [&](std::size_t i) {
      return prediction_record(*chosen[i], lead(chosen[i]->transcript.sentences, c.word_budget));
    });
  } else if (c.method == "lexrank") {
    auto enc = load_encoder(c);
    LexRankConfig lr;
    cfg["lexrank"] = lr.to_json();
    cfg["encoder"] = enc.identity;
    records = parallel_map(chosen.size(), c.threads, [&](std::size_t i) {
      return prediction_record(*chosen[i], lexrank(*chosen[i], *enc.provider, c.word_budget, lr));
    });
  } else if (c.method == "oracle") {
    auto labels = read_labels(c);
    inputs["labels"] = content_hash(c.at(artifacts::kLabels));
    for (const auto* p : chosen) {
      auto it = labels.find(p->pair_id);
      if (it == labels.end()) throw FormatError("no labels for pair '" + p->pair_id + "'");
      records.push_back(prediction_record(*p, ext_oracle(it->second)));
    }
  } else {
    throw ConfigError("unknown baseline method '" + c.method + "' (lexrank, lead, oracle)");
  }
  cfg["inputs"] = inputs;
  fs::path out = c.work_dir / ("baseline_" + c.method + ".jsonl");
  RecordWriter w(out, make_header(formats::kExtractive, cfg));
  for (const auto& r : records) w.write(r);
  w.close();
  return {"baseline", {describe_count(records.size(), (c.method + " summaries").c_str(), out)}};
}

// Reads {pair_id, summary_text} records; a leading stage header is skipped
// so both pipeline outputs and external prediction files are accepted.
inline std::vector<Prediction> read_predictions(const fs::path& path) {
  std::vector<Prediction> out;
  auto lines = read_jsonl(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0 && lines[i].contains("format") && lines[i].contains("config_hash")) continue;
    out.push_back({require<std::string>(lines[i], "pair_id"), require<std::string>(lines[i], "summary_text")});
  }
  return out;
}

inline StageReport run_evaluate(const RunConfig& c) {
  using namespace pipeline_detail;
  fs::path pred_path = c.predictions.empty() ? c.at(artifacts::kPredictions) : c.predictions;
  require_file(pred_path, "predictions file");
  auto pairs = read_pairs(c);
  auto split = read_split(c);
  std::vector<DocumentSummaryPair> eval_pairs;
  for (const auto* p : select_pairs(pairs, split_ids(split, c.eval_split))) eval_pairs.push_back(*p);
  auto report = evaluate(read_predictions(pred_path), eval_pairs, c.threads);

  Json cfg = stage_config("evaluate");
  cfg["metrics"] = rouge_config();
  cfg["split"] = c.eval_split;
  cfg["inputs"] = {{"predictions", content_hash(pred_path)},
                   {"pairs", content_hash(c.at(artifacts::kPairs))},
                   {"split", content_hash(c.at(artifacts::kSplit))}};
  const std::string stem = pred_path.stem().string();
  fs::path json_out = c.work_dir / (stem + ".metrics.jsonl");
  fs::path text_out = c.work_dir / (stem + ".metrics.txt");
  RecordWriter w(json_out, make_header(formats::kMetrics, cfg));
  for (const auto& d : report.per_doc) w.write(to_json(d));
  w.write(summary_json(report));
  w.close();
  write_file(text_out, format_table(report));
  auto lines = std::vector<std::string>{};
  std::string table = format_table(report);
  for (std::size_t pos = 0; pos < table.size();) {
    auto nl = table.find('\n', pos);
    lines.push_back(table.substr(pos, nl - pos));
    pos = nl + 1;
  }
  lines.push_back("report -> " + json_out.filename().string() + ", " + text_out.filename().string());
  return {"evaluate", lines};
}

inline std::vector<StageReport> run_pipeline(const RunConfig& c) {
  std::vector<StageReport> out;
  out.push_back(run_ingest(c));
  out.push_back(run_pair(c));
  out.push_back(run_split(c));
  out.push_back(run_labels(c));
  out.push_back(run_train(c));
  out.push_back(run_summarize(c));
  out.push_back(run_paraphrase(c));
  RunConfig eval = c;
  eval.predictions.clear();
  out.push_back(run_evaluate(eval));
  return out;
}

}  // namespace ectsum
