#include "longkey/chunking.hpp"

#include <sstream>
#include <stdexcept>

#include "longkey/rng.hpp"

namespace longkey::chunking {

ToyTokenizer::ToyTokenizer(int max_piece_chars, int vocab)
    : max_piece_chars_(max_piece_chars), vocab_(vocab) {
  if (max_piece_chars < 1) throw std::invalid_argument("ToyTokenizer: max_piece_chars must be >= 1");
  if (vocab < 1) throw std::invalid_argument("ToyTokenizer: vocab must be >= 1");
}

Encoding ToyTokenizer::encode(std::span<const std::string> words) const {
  Encoding enc;
  enc.first_token_index.reserve(words.size());
  enc.tokens_per_word.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    if (words[i].empty()) {
      std::ostringstream os;
      os << "tokenizer failed on word " << i << ": empty word";
      throw std::runtime_error(os.str());
    }
    std::string lowered = corpus::lower_ascii(words[i]);
    enc.first_token_index.push_back(static_cast<int>(enc.token_ids.size()));
    int pieces = 0;
    for (size_t off = 0; off < lowered.size(); off += max_piece_chars_) {
      std::string_view piece(lowered.data() + off,
                             std::min<size_t>(max_piece_chars_, lowered.size() - off));
      enc.token_ids.push_back(static_cast<int>(fnv1a64(piece) % vocab_));
      ++pieces;
    }
    enc.tokens_per_word.push_back(pieces);
  }
  return enc;
}

std::vector<std::pair<int, int>> split_chunks(int total_tokens, int max_len) {
  if (total_tokens < 1) throw std::invalid_argument("split_chunks: total_tokens must be >= 1");
  if (max_len < 1) throw std::invalid_argument("split_chunks: max_len must be >= 1");
  int n = (total_tokens + max_len - 1) / max_len;
  int base = total_tokens / n;
  int rem = total_tokens % n;
  std::vector<std::pair<int, int>> chunks;
  chunks.reserve(n);
  int start = 0;
  for (int c = 0; c < n; ++c) {
    int len = base + (c < rem ? 1 : 0);
    chunks.emplace_back(start, start + len);
    start += len;
  }
  return chunks;
}

TokenizedDocument tokenize(const corpus::Document& doc, const TokenizerAdapter& tok, int max_len) {
  Encoding enc = tok.encode(doc.words);
  for (size_t i = 0; i < enc.tokens_per_word.size(); ++i) {
    if (enc.tokens_per_word[i] < 1) {
      std::ostringstream os;
      os << "tokenizer failed on word " << i << ": produced no tokens";
      throw std::runtime_error(os.str());
    }
  }
  TokenizedDocument out;
  out.token_ids = std::move(enc.token_ids);
  out.first_token_index = std::move(enc.first_token_index);
  out.tokens_per_word = std::move(enc.tokens_per_word);
  out.chunk_boundaries = split_chunks(out.total_tokens(), max_len);
  return out;
}

corpus::Document truncate_to_tokens(const corpus::Document& doc, const TokenizerAdapter& tok,
                                    int max_tokens) {
  Encoding enc = tok.encode(doc.words);
  size_t keep = 0;
  int used = 0;
  for (size_t i = 0; i < doc.words.size(); ++i) {
    used += enc.tokens_per_word[i];
    if (used > max_tokens) break;
    keep = i + 1;
  }
  corpus::Document out = doc;
  out.words.resize(keep);
  out.is_punct.resize(keep);
  return out;
}

}  // namespace longkey::chunking
