#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "longkey/corpus.hpp"
#include "longkey/model.hpp"

namespace longkey::baselines {

struct CorpusStats {
  std::unordered_map<std::string, int> document_frequency;  // stemmed term -> df
  int corpus_size = 0;
};

CorpusStats build_corpus_stats(std::span<const corpus::Document> docs);

struct TextRankConfig {
  int window = 4;
  double damping = 0.85;
  int max_iterations = 100;
  double tolerance = 1e-8;
};

// Candidate n-grams scored by the mean member-word tf * idf, with
// idf = log((1 + corpus) / (1 + df)).
std::vector<model::RankedKeyphrase> tfidf_extract(const corpus::Document& doc,
                                                  const CorpusStats& stats, int n_max);

// PageRank over the undirected co-occurrence graph of non-punctuation word
// stems; n-gram score is the sum of member word scores. Scores are a
// probability distribution (they sum to 1).
std::unordered_map<std::string, double> textrank_word_scores(const corpus::Document& doc,
                                                             const TextRankConfig& cfg);

std::vector<model::RankedKeyphrase> textrank_extract(const corpus::Document& doc, int n_max,
                                                     const TextRankConfig& cfg = {});

}  // namespace longkey::baselines
