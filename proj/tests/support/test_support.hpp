#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// recompute expected values from first principles and must stay decoupled
// from the library code paths they check.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "longkey/corpus.hpp"
#include "longkey/evaluation.hpp"
#include "longkey/pipeline.hpp"
#include "longkey/rng.hpp"
#include "longkey/trainer.hpp"

namespace testsupport {

inline longkey::corpus::Document doc_from_text(const std::string& id, const std::string& text,
                                               const std::vector<std::string>& truths = {}) {
  longkey::corpus::Document doc;
  doc.id = id;
  longkey::corpus::segment_text(text, doc.words, doc.is_punct);
  std::vector<std::vector<std::string>> raw;
  for (const auto& t : truths) {
    std::vector<std::string> units;
    std::vector<uint8_t> punct;
    longkey::corpus::segment_text(t, units, punct);
    std::vector<std::string> kept;
    for (size_t i = 0; i < units.size(); ++i)
      if (!punct[i]) kept.push_back(units[i]);
    if (!kept.empty()) raw.push_back(std::move(kept));
  }
  doc.ground_truth = longkey::corpus::dedup_ground_truth(raw);
  return doc;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& contents) : path(name) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

// ---------------------------------------------------------------------------
// Brute-force metric oracle: plain set operations, nothing shared with
// longkey::evaluation.

struct OracleMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline OracleMetrics oracle_prf(const std::vector<std::string>& ranked,
                                const std::set<std::string>& truth, int k) {
  std::vector<std::string> top;
  for (const auto& key : ranked) {
    if (static_cast<int>(top.size()) == k) break;
    top.push_back(key);
  }
  int hits = 0;
  for (const auto& key : top)
    if (std::find(truth.begin(), truth.end(), key) != truth.end()) ++hits;
  OracleMetrics m;
  m.precision = top.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(top.size());
  m.recall = truth.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(truth.size());
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

inline double oracle_f1_at_oracle(const std::vector<std::string>& ranked,
                                  const std::set<std::string>& truth) {
  return oracle_prf(ranked, truth, static_cast<int>(truth.size())).f1;
}

// Exhaustive scan over K for the shared-best-K metric.
inline std::pair<double, int> oracle_best_k(
    const std::vector<std::pair<std::vector<std::string>, std::set<std::string>>>& docs,
    int limit = 100) {
  double best = -1.0;
  int best_k = 1;
  for (int k = 1; k <= limit; ++k) {
    double sum = 0.0;
    for (const auto& [ranked, truth] : docs) sum += oracle_prf(ranked, truth, k).f1;
    double macro = sum / static_cast<double>(docs.size());
    if (macro > best) {
      best = macro;
      best_k = k;
    }
  }
  return {best, best_k};
}

// ---------------------------------------------------------------------------
// Synthetic corpora. Keyword words are regular verbs whose s/ed/ing forms all
// stem back to the base, so surface variants of one phrase stay one candidate.

inline const std::vector<std::string>& keyword_pool() {
  static const std::vector<std::string> pool = {
      "connect", "process",   "filter",  "extend",  "deliver",
      "present", "report",    "select",  "collect", "direct",
      "predict", "inspect",   "convert", "construct", "transport",
      "experiment", "comment", "augment", "attract", "distract"};
  return pool;
}

inline std::vector<std::vector<std::string>> phrase_pool() {
  const auto& kw = keyword_pool();
  return {
      {kw[0], kw[1]}, {kw[2]}, {kw[3], kw[4], kw[5]}, {kw[6], kw[7]}, {kw[8]},
      {kw[9], kw[10]}, {kw[11], kw[12], kw[13]}, {kw[14]}, {kw[15], kw[16]},
      {kw[17], kw[18], kw[19]},
  };
}

// 8 documents, 50-word vocabulary (20 keyword + 30 filler words), 30-60 words,
// 2-4 planted keyphrases per document.
inline std::vector<longkey::corpus::Document> make_overfit_corpus(uint64_t seed) {
  longkey::Rng rng(seed);
  auto phrases = phrase_pool();
  std::vector<std::string> fillers;
  for (int i = 0; i < 30; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "filler%02d", i);
    fillers.emplace_back(buf);
  }

  std::vector<longkey::corpus::Document> docs;
  for (int d = 0; d < 8; ++d) {
    int target_len = 30 + static_cast<int>(rng.below(31));
    int truths = 2 + static_cast<int>(rng.below(3));

    std::vector<int> phrase_ids;
    while (static_cast<int>(phrase_ids.size()) < truths) {
      int p = static_cast<int>(rng.below(phrases.size()));
      if (std::find(phrase_ids.begin(), phrase_ids.end(), p) == phrase_ids.end())
        phrase_ids.push_back(p);
    }

    // Each planted phrase occurs twice.
    std::vector<std::vector<std::string>> inserts;
    int phrase_words = 0;
    for (int p : phrase_ids)
      for (int rep = 0; rep < 2; ++rep) {
        inserts.push_back(phrases[p]);
        phrase_words += static_cast<int>(phrases[p].size());
      }

    int filler_count = std::max(4, target_len - phrase_words);
    std::vector<std::vector<std::string>> units;
    for (int i = 0; i < filler_count; ++i)
      units.push_back({fillers[rng.below(fillers.size())]});
    for (auto& phrase : inserts) {
      size_t pos = rng.below(units.size() + 1);
      units.insert(units.begin() + pos, phrase);
    }

    longkey::corpus::Document doc;
    doc.id = "doc" + std::to_string(d);
    for (const auto& unit : units)
      for (const auto& w : unit) {
        doc.words.push_back(w);
        doc.is_punct.push_back(0);
      }
    std::vector<std::vector<std::string>> raw;
    for (int p : phrase_ids) raw.push_back(phrases[p]);
    doc.ground_truth = longkey::corpus::dedup_ground_truth(raw);
    docs.push_back(std::move(doc));
  }
  return docs;
}

// Ablation fixture: every planted keyphrase occurs once in its base surface
// and in three inflected distractor surfaces; inflected keyword unigrams are
// sprinkled as negatives elsewhere.
inline std::vector<longkey::corpus::Document> make_ablation_corpus(uint64_t seed) {
  longkey::Rng rng(seed);
  const auto& kw = keyword_pool();
  auto inflect = [](const std::string& base, int variant) {
    switch (variant) {
      case 1: return base + "s";
      case 2: return base + "ed";
      case 3: return base + "ing";
      default: return base;
    }
  };

  // Two-word phrases over dedicated keyword pairs.
  std::vector<std::pair<int, int>> pairs = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9},
                                            {10, 11}, {12, 13}, {14, 15}};
  std::vector<std::string> fillers;
  for (int i = 0; i < 24; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "noise%02d", i);
    fillers.emplace_back(buf);
  }

  std::vector<longkey::corpus::Document> docs;
  for (int d = 0; d < 8; ++d) {
    int truths = 2 + static_cast<int>(rng.below(2));
    std::vector<int> phrase_ids;
    while (static_cast<int>(phrase_ids.size()) < truths) {
      int p = static_cast<int>(rng.below(pairs.size()));
      if (std::find(phrase_ids.begin(), phrase_ids.end(), p) == phrase_ids.end())
        phrase_ids.push_back(p);
    }

    std::vector<std::vector<std::string>> units;
    int filler_count = 24 + static_cast<int>(rng.below(13));
    for (int i = 0; i < filler_count; ++i)
      units.push_back({fillers[rng.below(fillers.size())]});
    // Inflected unigram negatives from unused keywords.
    for (int i = 0; i < 6; ++i) {
      int k = 16 + static_cast<int>(rng.below(4));
      units.push_back({inflect(kw[k], static_cast<int>(rng.below(4)))});
    }
    for (int p : phrase_ids)
      for (int variant = 0; variant < 4; ++variant) {
        size_t pos = rng.below(units.size() + 1);
        units.insert(units.begin() + pos,
                     {inflect(kw[pairs[p].first], variant), inflect(kw[pairs[p].second], variant)});
      }

    longkey::corpus::Document doc;
    doc.id = "abl" + std::to_string(d);
    for (const auto& unit : units)
      for (const auto& w : unit) {
        doc.words.push_back(w);
        doc.is_punct.push_back(0);
      }
    std::vector<std::vector<std::string>> raw;
    for (int p : phrase_ids) raw.push_back({kw[pairs[p].first], kw[pairs[p].second]});
    doc.ground_truth = longkey::corpus::dedup_ground_truth(raw);
    docs.push_back(std::move(doc));
  }
  return docs;
}

// Pipeline used by the desk-scale experiments: frozen toy encoder, d = 32,
// whole-word toy tokens.
inline longkey::pipeline::PipelineConfig experiment_pipeline(
    longkey::model::PoolingMode pooling, uint64_t provider_seed = 2024) {
  longkey::pipeline::PipelineConfig pipe;
  pipe.model.width = 32;
  pipe.model.n_max = 5;
  pipe.model.pooling = pooling;
  pipe.model.mode = longkey::model::ModelMode::kLongkey;
  pipe.provider.name = "frozen_hash";
  pipe.provider.width = 32;
  pipe.provider.context_limit = 8192;
  pipe.provider.seed = provider_seed;
  pipe.tokenizer_piece_chars = 16;  // whole-word tokens
  pipe.tokenizer_vocab = 50021;
  return pipe;
}

struct ExperimentResult {
  double f1_at_oracle = 0.0;
  double first_loss = 0.0;
  double last_loss = 0.0;
};

// Train on the corpus and evaluate F1@O on the training set.
inline ExperimentResult run_experiment(const std::vector<longkey::corpus::Document>& docs,
                                       const longkey::pipeline::PipelineConfig& pipe,
                                       long iterations, uint64_t seed) {
  longkey::train::TrainConfig cfg;
  cfg.total_iterations = iterations;
  cfg.seed = seed;
  std::vector<longkey::train::TrainLogEntry> log;
  auto cp = longkey::train::train(docs, cfg, pipe,
                                  [&](const longkey::train::TrainLogEntry& e) { log.push_back(e); });

  auto tokenizer = longkey::pipeline::make_tokenizer(pipe);
  auto provider = longkey::encoder::make_provider(pipe.provider, &cp.params.encoder_table);
  std::vector<longkey::evaluation::DocEval> evals;
  for (const auto& doc : docs) {
    auto ranked = longkey::pipeline::extract_document(doc, tokenizer, *provider, cp.params,
                                                      pipe.model, provider->context_limit(), 100);
    longkey::evaluation::DocEval de;
    de.id = doc.id;
    de.truth = doc.truth_keys();
    for (const auto& kp : ranked) de.predicted.push_back(kp.stemmed_key);
    evals.push_back(std::move(de));
  }
  longkey::evaluation::EvalConfig ecfg;
  ecfg.ks = {5};
  auto report = longkey::evaluation::evaluate(evals, ecfg);

  ExperimentResult result;
  result.f1_at_oracle = report.f1_oracle;
  result.first_loss = log.front().total;
  result.last_loss = log.back().total;
  return result;
}

}  // namespace testsupport
