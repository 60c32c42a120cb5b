#include "longkey/candidates.hpp"

#include <stdexcept>
#include <unordered_map>

namespace longkey::candidates {

std::vector<Span> enumerate_spans(int word_count, int n_max) {
  if (word_count < 1) throw std::invalid_argument("enumerate_spans: word_count must be >= 1");
  if (n_max < 1) throw std::invalid_argument("enumerate_spans: n_max must be >= 1");
  std::vector<Span> spans;
  int max_len = std::min(n_max, word_count);
  for (int len = 1; len <= max_len; ++len)
    for (int start = 0; start + len <= word_count; ++start) spans.push_back({start, len});
  return spans;
}

std::vector<Span> filter_spans(const std::vector<Span>& spans, const corpus::Document& doc) {
  std::vector<Span> kept;
  kept.reserve(spans.size());
  for (const Span& s : spans) {
    bool ok = true;
    for (int i = s.start; i < s.start + s.len; ++i) {
      if (doc.is_punct[i]) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(s);
  }
  return kept;
}

CandidateSet build_candidates(const corpus::Document& doc, const std::vector<Span>& spans,
                              int n_max) {
  auto truth = doc.truth_keys();
  CandidateSet set;
  set.n_max = n_max;
  std::unordered_map<std::string, size_t> index;
  std::vector<std::string> span_words;
  for (const Span& s : spans) {
    span_words.assign(doc.words.begin() + s.start, doc.words.begin() + s.start + s.len);
    std::string key = corpus::normalize_keyphrase(span_words).stemmed_key;
    auto [it, inserted] = index.try_emplace(key, set.entries.size());
    if (inserted) {
      Candidate cand;
      cand.stemmed_key = key;
      for (const auto& w : span_words) {
        if (!cand.surface.empty()) cand.surface += ' ';
        cand.surface += w;
      }
      cand.label = truth.count(cand.stemmed_key) ? 1 : 0;
      set.entries.push_back(std::move(cand));
    }
    set.entries[it->second].occurrences.push_back(s);
  }
  return set;
}

}  // namespace longkey::candidates
