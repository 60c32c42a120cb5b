#include "longkey/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "longkey/candidates.hpp"

namespace longkey::baselines {

namespace {

// Stemmed forms of the document's non-punctuation words, with word positions.
std::vector<std::string> stemmed_words(const corpus::Document& doc) {
  std::vector<std::string> stems(doc.words.size());
  for (size_t i = 0; i < doc.words.size(); ++i)
    if (!doc.is_punct[i]) stems[i] = corpus::porter_stem(corpus::lower_ascii(doc.words[i]));
  return stems;
}

candidates::CandidateSet document_candidates(const corpus::Document& doc, int n_max) {
  if (doc.words.empty()) return {};
  auto spans = candidates::enumerate_spans(static_cast<int>(doc.words.size()), n_max);
  spans = candidates::filter_spans(spans, doc);
  if (spans.empty()) return {};
  return candidates::build_candidates(doc, spans, n_max);
}

std::vector<model::RankedKeyphrase> rank_entries(const candidates::CandidateSet& set,
                                                 const std::vector<double>& scores) {
  std::vector<model::ScoredCandidate> scored;
  scored.reserve(set.entries.size());
  for (size_t l = 0; l < set.entries.size(); ++l)
    scored.push_back({set.entries[l].stemmed_key, set.entries[l].surface, scores[l],
                      set.entries[l].occurrences});
  return model::rank_candidates(scored);
}

}  // namespace

CorpusStats build_corpus_stats(std::span<const corpus::Document> docs) {
  CorpusStats stats;
  stats.corpus_size = static_cast<int>(docs.size());
  for (const auto& doc : docs) {
    std::set<std::string> terms;
    auto stems = stemmed_words(doc);
    for (size_t i = 0; i < stems.size(); ++i)
      if (!doc.is_punct[i]) terms.insert(stems[i]);
    for (const auto& t : terms) ++stats.document_frequency[t];
  }
  return stats;
}

std::vector<model::RankedKeyphrase> tfidf_extract(const corpus::Document& doc,
                                                  const CorpusStats& stats, int n_max) {
  auto set = document_candidates(doc, n_max);
  if (set.entries.empty()) return {};

  auto stems = stemmed_words(doc);
  std::unordered_map<std::string, int> tf;
  for (size_t i = 0; i < stems.size(); ++i)
    if (!doc.is_punct[i]) ++tf[stems[i]];

  auto idf = [&](const std::string& term) {
    auto it = stats.document_frequency.find(term);
    int df = it == stats.document_frequency.end() ? 0 : it->second;
    return std::log((1.0 + stats.corpus_size) / (1.0 + df));
  };

  std::vector<double> scores(set.entries.size(), 0.0);
  for (size_t l = 0; l < set.entries.size(); ++l) {
    const auto& first = set.entries[l].occurrences.front();
    double acc = 0.0;
    for (int i = first.start; i < first.start + first.len; ++i)
      acc += static_cast<double>(tf[stems[i]]) * idf(stems[i]);
    scores[l] = acc / first.len;
  }
  return rank_entries(set, scores);
}

std::unordered_map<std::string, double> textrank_word_scores(const corpus::Document& doc,
                                                             const TextRankConfig& cfg) {
  if (cfg.window < 2) throw std::invalid_argument("textrank: window must be >= 2");
  if (cfg.damping <= 0.0 || cfg.damping >= 1.0)
    throw std::invalid_argument("textrank: damping must be in (0, 1)");

  // Non-punct word sequence, mapped to node ids by stem.
  auto stems = stemmed_words(doc);
  std::vector<int> seq;
  std::vector<std::string> node_stem;
  std::unordered_map<std::string, int> node_of;
  for (size_t i = 0; i < stems.size(); ++i) {
    if (doc.is_punct[i]) continue;
    auto [it, inserted] = node_of.try_emplace(stems[i], static_cast<int>(node_stem.size()));
    if (inserted) node_stem.push_back(stems[i]);
    seq.push_back(it->second);
  }
  const int v = static_cast<int>(node_stem.size());
  if (v == 0) return {};

  std::vector<std::set<int>> adj(v);
  for (size_t i = 0; i < seq.size(); ++i) {
    for (size_t j = i + 1; j < seq.size() && j < i + static_cast<size_t>(cfg.window); ++j) {
      if (seq[i] == seq[j]) continue;
      adj[seq[i]].insert(seq[j]);
      adj[seq[j]].insert(seq[i]);
    }
  }

  std::vector<double> rank(v, 1.0 / v), next(v);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    double dangling = 0.0;
    for (int i = 0; i < v; ++i)
      if (adj[i].empty()) dangling += rank[i];
    double base = (1.0 - cfg.damping) / v + cfg.damping * dangling / v;
    std::fill(next.begin(), next.end(), base);
    for (int i = 0; i < v; ++i) {
      if (adj[i].empty()) continue;
      double share = cfg.damping * rank[i] / static_cast<double>(adj[i].size());
      for (int j : adj[i]) next[j] += share;
    }
    double delta = 0.0;
    for (int i = 0; i < v; ++i) delta += std::fabs(next[i] - rank[i]);
    rank.swap(next);
    if (delta < cfg.tolerance) break;
  }

  std::unordered_map<std::string, double> scores;
  for (int i = 0; i < v; ++i) scores[node_stem[i]] = rank[i];
  return scores;
}

std::vector<model::RankedKeyphrase> textrank_extract(const corpus::Document& doc, int n_max,
                                                     const TextRankConfig& cfg) {
  auto word_scores = textrank_word_scores(doc, cfg);
  if (word_scores.empty()) return {};
  auto set = document_candidates(doc, n_max);
  if (set.entries.empty()) return {};

  auto stems = stemmed_words(doc);
  std::vector<double> scores(set.entries.size(), 0.0);
  for (size_t l = 0; l < set.entries.size(); ++l) {
    const auto& first = set.entries[l].occurrences.front();
    double acc = 0.0;
    for (int i = first.start; i < first.start + first.len; ++i) acc += word_scores[stems[i]];
    scores[l] = acc;
  }
  return rank_entries(set, scores);
}

}  // namespace longkey::baselines
