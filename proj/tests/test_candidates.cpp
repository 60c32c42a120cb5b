#include <doctest.h>

#include <sstream>

#include "longkey/candidates.hpp"

using namespace longkey;
using candidates::Span;

namespace {

corpus::Document doc_from_text(const std::string& text,
                               const std::vector<std::string>& truths = {}) {
  corpus::Document doc;
  doc.id = "t";
  corpus::segment_text(text, doc.words, doc.is_punct);
  std::vector<std::vector<std::string>> raw;
  for (const auto& t : truths) {
    std::vector<std::string> units;
    std::vector<uint8_t> punct;
    corpus::segment_text(t, units, punct);
    raw.push_back(units);
  }
  doc.ground_truth = corpus::dedup_ground_truth(raw);
  return doc;
}

}  // namespace

TEST_CASE("enumerate_spans counts") {
  CHECK(candidates::enumerate_spans(6, 5).size() == 20);  // 6+5+4+3+2
  CHECK(candidates::enumerate_spans(1, 5).size() == 1);
  CHECK(candidates::enumerate_spans(3, 5).size() == 6);  // 3+2+1
  CHECK(candidates::enumerate_spans(10, 1).size() == 10);
}

TEST_CASE("enumerate_spans covers exactly the valid (start, len) grid") {
  auto spans = candidates::enumerate_spans(4, 3);
  size_t expected = 4 + 3 + 2;
  REQUIRE(spans.size() == expected);
  for (const auto& s : spans) {
    CHECK(s.len >= 1);
    CHECK(s.len <= 3);
    CHECK(s.start >= 0);
    CHECK(s.start + s.len <= 4);
  }
}

TEST_CASE("filter_spans drops spans touching punctuation") {
  auto doc = doc_from_text("a , b");
  auto spans = candidates::enumerate_spans(3, 2);
  auto kept = candidates::filter_spans(spans, doc);
  // only the unigrams "a" and "b" survive
  REQUIRE(kept.size() == 2);
  CHECK(kept[0] == Span{0, 1});
  CHECK(kept[1] == Span{2, 1});
}

TEST_CASE("filter_spans is identity without punctuation and empty on all-punct") {
  auto clean = doc_from_text("a b c");
  auto spans = candidates::enumerate_spans(3, 2);
  CHECK(candidates::filter_spans(spans, clean).size() == spans.size());

  auto punct = doc_from_text(", . !");
  CHECK(candidates::filter_spans(candidates::enumerate_spans(3, 2), punct).empty());
}

TEST_CASE("build_candidates groups stem-equal occurrences and labels them") {
  auto doc = doc_from_text("neural networks help neural network users", {"neural network"});
  auto spans = candidates::filter_spans(
      candidates::enumerate_spans(static_cast<int>(doc.words.size()), 5), doc);
  auto set = candidates::build_candidates(doc, spans, 5);

  const candidates::Candidate* target = nullptr;
  for (const auto& c : set.entries)
    if (c.stemmed_key == "neural network") target = &c;
  REQUIRE(target != nullptr);
  REQUIRE(target->occurrences.size() == 2);
  CHECK(target->occurrences[0] == Span{0, 2});
  CHECK(target->occurrences[1] == Span{3, 2});
  CHECK(target->label == 1);
  CHECK(target->surface == "neural networks");

  for (const auto& c : set.entries)
    if (c.stemmed_key != "neural network") CHECK(c.label == 0);
}

TEST_CASE("ground truth longer than n_max never becomes a candidate") {
  auto doc = doc_from_text("one two three four five six seven",
                           {"one two three four five six"});
  auto spans = candidates::enumerate_spans(7, 5);
  auto set = candidates::build_candidates(doc, spans, 5);
  for (const auto& c : set.entries) {
    CHECK(c.label == 0);  // 6-word truth is unreachable
    CHECK(static_cast<int>(c.occurrences.front().len) <= 5);
  }
}

TEST_CASE("single-word document yields exactly one candidate") {
  auto doc = doc_from_text("word");
  auto set = candidates::build_candidates(doc, candidates::enumerate_spans(1, 5), 5);
  CHECK(set.entries.size() == 1);
  CHECK(set.entries[0].occurrences.size() == 1);
}

TEST_CASE("candidate partition property: occurrences sum to filtered spans") {
  auto doc = doc_from_text("the cat sat on the mat , the cat sat again");
  auto spans = candidates::filter_spans(
      candidates::enumerate_spans(static_cast<int>(doc.words.size()), 5), doc);
  auto set = candidates::build_candidates(doc, spans, 5);
  CHECK(set.total_occurrences() == spans.size());

  for (const auto& c : set.entries) CHECK(!c.occurrences.empty());
}

TEST_CASE("labeled candidates match the normalized ground truth both ways") {
  auto doc = doc_from_text("graph theory and neural networks and graphs",
                           {"graph", "neural networks", "absent phrase"});
  auto spans = candidates::filter_spans(
      candidates::enumerate_spans(static_cast<int>(doc.words.size()), 5), doc);
  auto set = candidates::build_candidates(doc, spans, 5);

  auto truth = doc.truth_keys();
  int positives = 0;
  for (const auto& c : set.entries) {
    if (c.label == 1) {
      ++positives;
      CHECK(truth.count(c.stemmed_key) == 1);
    }
  }
  // "graph" (covers "graphs" too) and "neural network" occur; "absent phrase" cannot.
  CHECK(positives == 2);
}

TEST_CASE("build_candidates is deterministic including occurrence order") {
  auto doc = doc_from_text("b a b a b");
  auto spans = candidates::enumerate_spans(5, 3);
  auto a = candidates::build_candidates(doc, spans, 3);
  auto b = candidates::build_candidates(doc, spans, 3);
  REQUIRE(a.entries.size() == b.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].stemmed_key == b.entries[i].stemmed_key);
    CHECK(a.entries[i].occurrences == b.entries[i].occurrences);
    // occurrences ascend in document order
    for (size_t o = 1; o < a.entries[i].occurrences.size(); ++o)
      CHECK(a.entries[i].occurrences[o - 1].start < a.entries[i].occurrences[o].start);
  }
}
