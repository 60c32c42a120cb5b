#include <doctest.h>

#include <cmath>

#include "longkey/encoder.hpp"

using namespace longkey;
using encoder::FrozenHashProvider;

namespace {

corpus::Document make_doc(std::vector<std::string> words) {
  corpus::Document doc;
  doc.id = "t";
  doc.is_punct.assign(words.size(), 0);
  doc.words = std::move(words);
  return doc;
}

// Degenerate provider for shape checks.
class ZeroProvider final : public encoder::EmbeddingProvider {
 public:
  ZeroProvider(int width, int limit) : width_(width), limit_(limit) {}
  int width() const override { return width_; }
  int context_limit() const override { return limit_; }
  bool trainable() const override { return false; }
  void embed_chunk(std::span<const int>, Matrix&) const override {}

 private:
  int width_, limit_;
};

chunking::TokenizedDocument tokenized(const std::vector<std::string>& words, int max_len) {
  chunking::ToyTokenizer tok(4, 1000);
  return chunking::tokenize(make_doc(words), tok, max_len);
}

}  // namespace

TEST_CASE("embed_document produces one row per token") {
  auto tdoc = tokenized({"alpha", "beta", "gamma", "delta", "epsilon"}, 8192);
  FrozenHashProvider provider(7, 16, 8192);
  auto emb = encoder::embed_document(tdoc, provider);
  CHECK(emb.rows() == tdoc.total_tokens());
  CHECK(emb.cols() == 16);
}

TEST_CASE("frozen provider rows are unit vectors and chunk independent") {
  auto one_chunk = tokenized({"aaaa", "bbbb", "cccc", "dddd", "eeee"}, 8192);
  auto two_chunks = tokenized({"aaaa", "bbbb", "cccc", "dddd", "eeee"}, 3);
  REQUIRE(two_chunks.chunk_boundaries.size() == 2);

  FrozenHashProvider provider(7, 32, 8192);
  auto a = encoder::embed_document(one_chunk, provider);
  auto b = encoder::embed_document(two_chunks, provider);
  CHECK(a == b);  // context-free: identical bits regardless of chunking

  for (int r = 0; r < a.rows(); ++r) {
    double norm = 0;
    for (double v : a.row(r)) norm += v * v;
    CHECK(std::fabs(std::sqrt(norm) - 1.0) < 1e-12);
  }
}

TEST_CASE("chunk concatenation is associative for context-free providers") {
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) words.push_back("w" + std::to_string(i));
  FrozenHashProvider provider(11, 8, 1 << 20);
  auto split_a = tokenized(words, 7);
  auto split_b = tokenized(words, 23);
  CHECK(encoder::embed_document(split_a, provider) ==
        encoder::embed_document(split_b, provider));
}

TEST_CASE("zero provider yields an all-zero matrix") {
  auto tdoc = tokenized({"abc", "def"}, 8192);
  ZeroProvider provider(4, 8192);
  auto emb = encoder::embed_document(tdoc, provider);
  for (double v : emb.data()) CHECK(v == 0.0);
}

TEST_CASE("embed_document rejects chunks over the context limit") {
  auto tdoc = tokenized({"aaaa", "bbbb", "cccc"}, 8192);  // one chunk of 3
  FrozenHashProvider provider(4, 2);
  CHECK_THROWS_AS(encoder::embed_document(tdoc, provider), std::runtime_error);
}

TEST_CASE("select_word_embeddings gathers first-token rows") {
  chunking::TokenizedDocument tdoc;
  tdoc.token_ids = {10, 20, 21, 30};
  tdoc.first_token_index = {0, 1, 3};
  tdoc.tokens_per_word = {1, 2, 1};
  tdoc.chunk_boundaries = {{0, 4}};

  Matrix tokens(4, 2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) tokens.at(r, c) = 10.0 * r + c;

  auto words = encoder::select_word_embeddings(tokens, tdoc);
  REQUIRE(words.rows() == 3);
  CHECK(words.at(0, 0) == 0.0);
  CHECK(words.at(1, 0) == 10.0);
  CHECK(words.at(2, 0) == 30.0);  // rows 0, 1, 3

  SUBCASE("changing a non-first token row does not matter") {
    tokens.at(2, 0) = 999.0;
    auto again = encoder::select_word_embeddings(tokens, tdoc);
    CHECK(again == words);
  }

  SUBCASE("all words single-token means identity") {
    chunking::TokenizedDocument flat;
    flat.token_ids = {1, 2, 3};
    flat.first_token_index = {0, 1, 2};
    flat.tokens_per_word = {1, 1, 1};
    flat.chunk_boundaries = {{0, 3}};
    Matrix small(3, 2);
    for (int r = 0; r < 3; ++r) small.at(r, 0) = r;
    CHECK(encoder::select_word_embeddings(small, flat) == small);
  }

  SUBCASE("out-of-range index is an internal consistency error") {
    tdoc.first_token_index = {0, 1, 9};
    CHECK_THROWS_AS(encoder::select_word_embeddings(tokens, tdoc), std::logic_error);
  }
}

TEST_CASE("extend_positional duplicates the table") {
  Matrix table(4, 3);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) table.at(r, c) = r * 10 + c;

  auto doubled = encoder::extend_positional(table, 8);
  REQUIRE(doubled.rows() == 8);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) {
      CHECK(doubled.at(r, c) == table.at(r, c));
      CHECK(doubled.at(r + 4, c) == table.at(r, c));
    }

  CHECK(encoder::extend_positional(table, 4) == table);
  CHECK_THROWS_AS(encoder::extend_positional(table, 6), std::invalid_argument);
  CHECK_THROWS_AS(encoder::extend_positional(table, 2), std::invalid_argument);
}

TEST_CASE("extend_positional covers the documented longformer-size extension") {
  Matrix table(4096, 2);
  for (int r = 0; r < table.rows(); ++r) table.at(r, 0) = r;
  auto extended = encoder::extend_positional(table, 8192);
  CHECK(extended.rows() == 8192);
  CHECK(extended.at(4096, 0) == 0.0);
  CHECK(extended.at(8191, 0) == 4095.0);
}

TEST_CASE("provider factory builds both toys and rejects unknown names") {
  encoder::ProviderConfig cfg;
  cfg.name = "frozen_hash";
  cfg.width = 8;
  auto frozen = encoder::make_provider(cfg);
  CHECK(frozen->trainable() == false);
  CHECK(frozen->width() == 8);

  Matrix table(10, 8);
  cfg.name = "trainable_lookup";
  auto lookup = encoder::make_provider(cfg, &table);
  CHECK(lookup->trainable() == true);
  CHECK(lookup->width() == 8);

  cfg.name = "nope";
  CHECK_THROWS_AS(encoder::make_provider(cfg), std::invalid_argument);
}
