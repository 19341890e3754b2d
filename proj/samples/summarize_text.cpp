// Summarizes a plain-text transcript with LexRank and the lead baseline,
// then paraphrases the LexRank picks with the rule backend.
//
//   summarize_text <file> [word_budget]

#include <cstdlib>
#include <iostream>

#include "ectsum/baselines.hpp"
#include "ectsum/metrics.hpp"
#include "ectsum/paraphraser.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: summarize_text <file> [word_budget]\n";
    return 2;
  }
  try {
    std::size_t budget = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : ectsum::kDefaultWordBudget;
    ectsum::DocumentSummaryPair pair;
    pair.pair_id = "input";
    pair.transcript.sentences = ectsum::split_sentences(ectsum::read_file(argv[1]));
    if (pair.transcript.sentences.empty()) {
      std::cerr << "no sentences found\n";
      return 1;
    }

    std::vector<std::vector<std::string>> docs;
    for (const auto& s : pair.transcript.sentences) docs.push_back(s.tokens);
    ectsum::LexicalEncoder enc(ectsum::fit_lexical(docs, 1 << 16, 256));

    const auto& sents = pair.transcript.sentences;
    auto keys = ectsum::document_keys(sents);
    auto show = [&](const char* title, const std::vector<std::size_t>& picks) {
      std::cout << "== " << title << '\n';
      std::string text;
      for (auto i : picks) {
        std::cout << "  [" << i << "] " << sents[i].text << '\n';
        text += sents[i].text + '\n';
      }
      if (auto np = ectsum::num_prec(text, keys))
        std::cout << "  num-prec " << np->value() << '\n';
    };

    auto picks = ectsum::lexrank(pair, enc, budget);
    show("lexrank", picks);
    show("lead", ectsum::lead(sents, budget));

    std::cout << "== bullets\n";
    ectsum::RuleBackend rules;
    for (auto i : picks) {
      auto out = ectsum::paraphrase(sents[i], rules);
      std::cout << "  - " << ectsum::bullet_of(out).text;
      if (std::holds_alternative<ectsum::ValueLoss>(out)) std::cout << "  (value dropped)";
      std::cout << '\n';
    }
  } catch (const ectsum::Error& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
