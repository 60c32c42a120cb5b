#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "longkey/porter.hpp"

namespace longkey::corpus {

// Stemmed, lowercased, space-joined keyphrase identity.
struct NormalizedKeyphrase {
  std::string stemmed_key;
  int word_count = 0;
};

struct GroundTruth {
  NormalizedKeyphrase norm;
  std::string surface;  // first surface form seen, for reporting
};

struct Document {
  std::string id;
  std::vector<std::string> words;
  std::vector<uint8_t> is_punct;  // parallel to words
  std::vector<GroundTruth> ground_truth;

  size_t word_count() const { return words.size(); }
  std::set<std::string> truth_keys() const;
};

std::string lower_ascii(std::string_view s);

// Whitespace split with leading/trailing punctuation runs detached into
// separate units. Interior punctuation stays inside the word.
void segment_text(std::string_view text, std::vector<std::string>& words,
                  std::vector<uint8_t>& is_punct);

// Lowercase + per-word Porter stem + single-space join.
// Throws std::invalid_argument on an empty sequence or empty word.
NormalizedKeyphrase normalize_keyphrase(const std::vector<std::string>& words);

// Set keyed by stemmed_key, first surface form retained, input order kept.
std::vector<GroundTruth> dedup_ground_truth(const std::vector<std::vector<std::string>>& raw);

// Streaming JSONL reader. Each line: {"id": ..., "document": string or
// [sections...], "keyphrases": [strings]}. Malformed lines raise with the
// line number. Single consumer.
class JsonlReader {
 public:
  explicit JsonlReader(const std::string& path);

  std::optional<Document> next();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  long line_no_ = 0;
};

std::vector<Document> load_jsonl(const std::string& path);

}  // namespace longkey::corpus
