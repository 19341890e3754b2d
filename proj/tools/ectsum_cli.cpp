// Command-line entry point for the ectsum pipeline.

#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ectsum/pipeline.hpp"

namespace {

using ectsum::Json;
using ectsum::RunConfig;
using ectsum::StageReport;

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kConfig = 3,
  kMissingInput = 4,
  kFormat = 5,
  kIo = 6,
  kDiverged = 7,
  kBackend = 8,
  kData = 9,
};

int exit_code_for(const std::string& kind) {
  static const std::map<std::string, int> codes = {
      {"ConfigError", kConfig},       {"MissingInput", kMissingInput},
      {"FormatError", kFormat},       {"AmbiguousEvent", kFormat},
      {"IoError", kIo},               {"TrainingDiverged", kDiverged},
      {"BackendViolation", kBackend}, {"UnknownPlaceholder", kBackend},
  };
  auto it = codes.find(kind);
  return it == codes.end() ? kData : it->second;
}

int report_error(const std::string& kind, const std::string& message, int code,
                 const std::string& subcommand) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  if (!subcommand.empty()) j["subcommand"] = subcommand;
  std::cerr << j.dump() << '\n';
  return code;
}

void print(const StageReport& r) {
  for (const auto& line : r.lines) std::cout << r.stage << ": " << line << '\n';
}

// The config file is read before flag parsing so that flags override it.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  std::string active;
  try {
    RunConfig cfg;
    std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) cfg = ectsum::load_run_config(config_path);

    CLI::App app{"ectsum: earnings call transcript summarization toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "ectsum 1.0.0");

    std::string unused_config;
    app.add_option("--config", unused_config, "JSON config file; flags override its values");
    app.add_option("-w,--work-dir", cfg.work_dir, "Directory holding stage artifacts")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for splitting and training")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores); never changes outputs")
        ->capture_default_str();
    app.add_option("--encoder", cfg.encoder, "lexical | precomputed:<path>")->capture_default_str();
    app.add_option("--hash-buckets", cfg.hash_buckets, "Lexical encoder hash buckets")->capture_default_str();
    app.add_option("--projection-dim", cfg.projection_dim, "Lexical encoder dimension (0 = no projection)")
        ->capture_default_str();
    app.add_option("--word-budget", cfg.word_budget, "Summary word budget")->capture_default_str();
    app.add_option("--split", cfg.eval_split, "Split to summarize and evaluate")->capture_default_str();

    struct Command {
      const char* name;
      const char* help;
      std::function<void()> run;
    };
    std::vector<Command> commands = {
        {"ingest", "Clean raw transcripts and articles", [&] { print(ectsum::run_ingest(cfg)); }},
        {"pair", "Pair transcripts with summary articles", [&] { print(ectsum::run_pair(cfg)); }},
        {"split", "Seeded train/validation/test split", [&] { print(ectsum::run_split(cfg)); }},
        {"stats", "Coverage, density, compression and position statistics",
         [&] { print(ectsum::run_stats(cfg)); }},
        {"labels", "Fit the lexical encoder and build oracle labels and paraphrase pairs",
         [&] { print(ectsum::run_labels(cfg)); }},
        {"train", "Train the extractive sentence scorer", [&] { print(ectsum::run_train(cfg)); }},
        {"summarize", "Select sentences with the trained scorer", [&] { print(ectsum::run_summarize(cfg)); }},
        {"paraphrase", "Rewrite selected sentences into bullets", [&] { print(ectsum::run_paraphrase(cfg)); }},
        {"baseline", "Run a reference summarizer", [&] { print(ectsum::run_baseline(cfg)); }},
        {"evaluate", "Score predictions with ROUGE and Num-Prec", [&] { print(ectsum::run_evaluate(cfg)); }},
        {"pipeline", "ingest, pair, split, labels, train, summarize, paraphrase, evaluate",
         [&] {
           for (const auto& r : ectsum::run_pipeline(cfg)) print(r);
         }},
    };
    std::map<std::string, CLI::App*> subs;
    for (auto& c : commands) subs[c.name] = app.add_subcommand(c.name, c.help);

    for (const char* name : {"ingest", "pipeline"}) {
      subs[name]->add_option("--transcripts", cfg.transcripts, "Raw transcript records (JSON lines)");
      subs[name]->add_option("--articles", cfg.articles, "Raw summary article records (JSON lines)");
    }
    for (const char* name : {"pair", "pipeline"})
      subs[name]->add_option("--max-merge", cfg.max_merge, "Cap on merged articles per event (0 = no cap)");
    subs["stats"]->add_option("--release-dir", cfg.release_dir,
                              "Compute statistics over a public release directory instead");
    for (const char* name : {"train", "pipeline"}) {
      auto* s = subs[name];
      s->add_option("--epochs", cfg.train.max_epochs, "Maximum epochs")->capture_default_str();
      s->add_option("--learning-rate", cfg.train.learning_rate, "Adam learning rate")->capture_default_str();
      s->add_option("--batch-size", cfg.train.batch_size, "Documents per update")->capture_default_str();
      s->add_option("--patience", cfg.train.patience, "Early-stop patience in epochs (0 = off)")
          ->capture_default_str();
      s->add_option("--hidden", cfg.train.dims.hidden, "Recurrent hidden size")->capture_default_str();
      s->add_option("--position-dim", cfg.train.dims.position, "Position embedding size")->capture_default_str();
      s->add_option("--max-pos", cfg.train.dims.max_pos, "Absolute position table size")->capture_default_str();
    }
    for (const char* name : {"paraphrase", "pipeline"}) {
      subs[name]->add_option("--backend", cfg.backend, "identity | rule | subprocess:<command>")
          ->capture_default_str();
      subs[name]->add_option("--rules", cfg.rules, "Rule table JSON replacing the built-in one");
    }
    subs["baseline"]
        ->add_option("--method", cfg.method, "lexrank | lead | oracle")
        ->check(CLI::IsMember({"lexrank", "lead", "oracle"}))
        ->capture_default_str();
    subs["evaluate"]->add_option("--predictions", cfg.predictions,
                                 "Prediction records {pair_id, summary_text}; defaults to predictions.jsonl");

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      return report_error("UsageError", e.what(), kUsage, "");
    }

    for (auto& c : commands) {
      if (subs[c.name]->parsed()) {
        active = c.name;
        c.run();
      }
    }
    return kOk;
  } catch (const ectsum::Error& e) {
    return report_error(e.kind(), e.what(), exit_code_for(e.kind()), active);
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), kUnexpected, active);
  }
}
