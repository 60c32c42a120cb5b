#pragma once

#include <string>
#include <vector>

#include "longkey/corpus.hpp"

namespace longkey::candidates {

// Word-level n-gram occurrence: words [start, start + len).
struct Span {
  int start = 0;
  int len = 1;

  friend bool operator==(const Span& a, const Span& b) {
    return a.start == b.start && a.len == b.len;
  }
};

struct Candidate {
  std::string stemmed_key;
  std::string surface;            // first occurrence's surface words
  std::vector<Span> occurrences;  // document order
  int label = 0;                  // 1 iff stemmed_key is in the ground truth
};

struct CandidateSet {
  std::vector<Candidate> entries;  // first-seen order
  int n_max = 0;

  size_t size() const { return entries.size(); }
  size_t total_occurrences() const {
    size_t n = 0;
    for (const auto& c : entries) n += c.occurrences.size();
    return n;
  }
};

// All (start, len) with len in [1, min(n_max, N)], grouped by len ascending.
std::vector<Span> enumerate_spans(int word_count, int n_max);

// Drops spans containing any punctuation unit.
std::vector<Span> filter_spans(const std::vector<Span>& spans, const corpus::Document& doc);

// Group spans by normalized surface form; label against the ground truth.
CandidateSet build_candidates(const corpus::Document& doc, const std::vector<Span>& spans,
                              int n_max);

}  // namespace longkey::candidates
