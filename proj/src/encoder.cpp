#include "longkey/encoder.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "longkey/rng.hpp"

namespace longkey::encoder {

FrozenHashProvider::FrozenHashProvider(uint64_t seed, int width, int context_limit)
    : seed_(seed), width_(width), limit_(context_limit) {
  if (width < 1) throw std::invalid_argument("FrozenHashProvider: width must be >= 1");
  if (context_limit < 1) throw std::invalid_argument("FrozenHashProvider: context_limit must be >= 1");
}

void FrozenHashProvider::embed_chunk(std::span<const int> token_ids, Matrix& out) const {
  for (size_t r = 0; r < token_ids.size(); ++r) {
    uint64_t base = mix64(seed_ ^ mix64(static_cast<uint64_t>(token_ids[r]) + 0x51ed2701));
    auto row = out.row(static_cast<int>(r));
    double norm_sq = 0.0;
    for (int j = 0; j < width_; ++j) {
      uint64_t u = mix64(base + static_cast<uint64_t>(j));
      double v = static_cast<double>(u >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
      row[j] = v;
      norm_sq += v * v;
    }
    double norm = std::sqrt(norm_sq);
    if (norm == 0.0) {
      row[0] = 1.0;
    } else {
      for (int j = 0; j < width_; ++j) row[j] /= norm;
    }
  }
}

TrainableLookupProvider::TrainableLookupProvider(const Matrix* table, int context_limit)
    : table_(table), limit_(context_limit) {
  if (table == nullptr || table->rows() < 1)
    throw std::invalid_argument("TrainableLookupProvider: missing lookup table");
  if (context_limit < 1)
    throw std::invalid_argument("TrainableLookupProvider: context_limit must be >= 1");
}

void TrainableLookupProvider::embed_chunk(std::span<const int> token_ids, Matrix& out) const {
  for (size_t r = 0; r < token_ids.size(); ++r) {
    int id = token_ids[r];
    if (id < 0 || id >= table_->rows()) {
      std::ostringstream os;
      os << "token id " << id << " outside lookup table of " << table_->rows() << " rows";
      throw std::out_of_range(os.str());
    }
    auto src = table_->row(id);
    auto dst = out.row(static_cast<int>(r));
    std::memcpy(dst.data(), src.data(), src.size() * sizeof(double));
  }
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& cfg, const Matrix* table) {
  if (cfg.name == "frozen_hash")
    return std::make_unique<FrozenHashProvider>(cfg.seed, cfg.width, cfg.context_limit);
  if (cfg.name == "trainable_lookup")
    return std::make_unique<TrainableLookupProvider>(table, cfg.context_limit);
  throw std::invalid_argument("unknown embedding provider: " + cfg.name);
}

Matrix embed_document(const chunking::TokenizedDocument& tdoc, const EmbeddingProvider& provider) {
  const int total = tdoc.total_tokens();
  Matrix out(total, provider.width());
  Matrix chunk_out;
  for (const auto& [start, end] : tdoc.chunk_boundaries) {
    int len = end - start;
    if (len > provider.context_limit()) {
      std::ostringstream os;
      os << "chunk of " << len << " tokens exceeds provider context limit "
         << provider.context_limit();
      throw std::runtime_error(os.str());
    }
    chunk_out = Matrix(len, provider.width());
    provider.embed_chunk(std::span<const int>(tdoc.token_ids.data() + start, len), chunk_out);
    std::memcpy(out.row(start).data(), chunk_out.data().data(),
                static_cast<size_t>(len) * provider.width() * sizeof(double));
  }
  return out;
}

Matrix select_word_embeddings(const Matrix& token_emb, const chunking::TokenizedDocument& tdoc) {
  const int n = tdoc.word_count();
  Matrix out(n, token_emb.cols());
  for (int i = 0; i < n; ++i) {
    int t = tdoc.first_token_index[i];
    if (t < 0 || t >= token_emb.rows())
      throw std::logic_error("select_word_embeddings: first_token_index out of range");
    std::memcpy(out.row(i).data(), token_emb.row(t).data(),
                static_cast<size_t>(token_emb.cols()) * sizeof(double));
  }
  return out;
}

Matrix extend_positional(const Matrix& table, int new_len) {
  if (table.rows() < 1) throw std::invalid_argument("extend_positional: empty table");
  if (new_len < table.rows() || new_len % table.rows() != 0) {
    std::ostringstream os;
    os << "unsupported positional extension: " << table.rows() << " -> " << new_len
       << " (target must be a positive multiple)";
    throw std::invalid_argument(os.str());
  }
  Matrix out(new_len, table.cols());
  for (int r = 0; r < new_len; ++r)
    std::memcpy(out.row(r).data(), table.row(r % table.rows()).data(),
                static_cast<size_t>(table.cols()) * sizeof(double));
  return out;
}

}  // namespace longkey::encoder
