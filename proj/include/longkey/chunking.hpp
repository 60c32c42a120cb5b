#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "longkey/corpus.hpp"

namespace longkey::chunking {

struct Encoding {
  std::vector<int> token_ids;         // length T
  std::vector<int> first_token_index; // length N, strictly increasing
  std::vector<int> tokens_per_word;   // length N, each >= 1
};

struct TokenizedDocument {
  std::vector<int> token_ids;
  std::vector<int> first_token_index;
  std::vector<int> tokens_per_word;
  std::vector<std::pair<int, int>> chunk_boundaries;  // half-open token ranges

  int total_tokens() const { return static_cast<int>(token_ids.size()); }
  int word_count() const { return static_cast<int>(first_token_index.size()); }
};

class TokenizerAdapter {
 public:
  virtual ~TokenizerAdapter() = default;
  virtual int vocab_size() const = 0;
  // Deterministic; every word yields >= 1 token. Failures name the word index.
  virtual Encoding encode(std::span<const std::string> words) const = 0;
};

// Deterministic subword stand-in: lowercases each word and splits it
// left-to-right into pieces of at most max_piece_chars characters; piece ids
// come from hashing into a fixed id space. No pretrained assets involved.
class ToyTokenizer final : public TokenizerAdapter {
 public:
  explicit ToyTokenizer(int max_piece_chars = 4, int vocab = 50021);

  int vocab_size() const override { return vocab_; }
  int max_piece_chars() const { return max_piece_chars_; }
  Encoding encode(std::span<const std::string> words) const override;

 private:
  int max_piece_chars_;
  int vocab_;
};

// Partition [0, T) into ceil(T / max_len) contiguous chunks whose sizes
// differ by at most one.
std::vector<std::pair<int, int>> split_chunks(int total_tokens, int max_len);

TokenizedDocument tokenize(const corpus::Document& doc, const TokenizerAdapter& tok,
                           int max_len);

// Copy of doc keeping the longest word prefix that fits in max_tokens whole
// words. Ground truth is untouched.
corpus::Document truncate_to_tokens(const corpus::Document& doc, const TokenizerAdapter& tok,
                                    int max_tokens);

}  // namespace longkey::chunking
