#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "longkey/chunking.hpp"
#include "longkey/matrix.hpp"

namespace longkey::encoder {

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int width() const = 0;
  virtual int context_limit() const = 0;
  virtual bool trainable() const = 0;
  // Fill `out` (ids.size() x width) with chunk-local token embeddings.
  virtual void embed_chunk(std::span<const int> token_ids, Matrix& out) const = 0;
};

// Plugin description. Toy providers ignore global_attention and
// weights_path; a real long-context encoder plugin honours them.
struct ProviderConfig {
  std::string name = "frozen_hash";
  int width = 32;
  int context_limit = 8192;
  uint64_t seed = 1234;
  int vocab_size = 50021;  // trainable_lookup table rows
  std::string global_attention = "cls";
  std::string weights_path;
};

// Context-free provider mapping each token id to a fixed pseudo-random unit
// vector derived from the seed. Never trains.
class FrozenHashProvider final : public EmbeddingProvider {
 public:
  FrozenHashProvider(uint64_t seed, int width, int context_limit);

  int width() const override { return width_; }
  int context_limit() const override { return limit_; }
  bool trainable() const override { return false; }
  void embed_chunk(std::span<const int> token_ids, Matrix& out) const override;

 private:
  uint64_t seed_;
  int width_;
  int limit_;
};

// Context-free lookup table view; the table itself lives with the model
// parameters so gradients flow into it.
class TrainableLookupProvider final : public EmbeddingProvider {
 public:
  TrainableLookupProvider(const Matrix* table, int context_limit);

  int width() const override { return table_->cols(); }
  int context_limit() const override { return limit_; }
  bool trainable() const override { return true; }
  void embed_chunk(std::span<const int> token_ids, Matrix& out) const override;

 private:
  const Matrix* table_;
  int limit_;
};

// `table` is required (and owned elsewhere) for trainable_lookup.
std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& cfg,
                                                 const Matrix* table = nullptr);

// Per-chunk embeddings concatenated in chunk order; rows == total tokens.
Matrix embed_document(const chunking::TokenizedDocument& tdoc, const EmbeddingProvider& provider);

// Gather of each word's first-token row.
Matrix select_word_embeddings(const Matrix& token_emb, const chunking::TokenizedDocument& tdoc);

// Duplicate a positional table to an exact multiple of its length.
Matrix extend_positional(const Matrix& table, int new_len);

}  // namespace longkey::encoder
