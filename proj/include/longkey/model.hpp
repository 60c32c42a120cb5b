#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "longkey/candidates.hpp"
#include "longkey/chunking.hpp"
#include "longkey/encoder.hpp"
#include "longkey/matrix.hpp"
#include "longkey/rng.hpp"

namespace longkey::model {

enum class PoolingMode { kMax, kAvg, kSum };
enum class ModelMode { kLongkey, kPerOccurrenceRank, kRankOnly, kChunkOnly };

PoolingMode parse_pooling(std::string_view name);
ModelMode parse_mode(std::string_view name);
std::string_view to_string(PoolingMode mode);
std::string_view to_string(ModelMode mode);

struct ModelConfig {
  int width = 768;
  int n_max = 5;
  PoolingMode pooling = PoolingMode::kMax;
  ModelMode mode = ModelMode::kLongkey;
  bool filter_punct_spans = true;
  int negative_cap = 512;  // MR-loss negative subsample cap per document
};

// Every trainable tensor in one place: per-kernel conv stacks, both linear
// heads and (when the embedding provider trains) its lookup table. Keeping
// them together makes the optimizer and the finite-difference check a flat
// walk over named spans.
struct ModelParams {
  int width = 0;
  int n_max = 0;
  std::vector<Matrix> conv_w;  // [k-1]: width x (k*width)
  std::vector<Vector> conv_b;  // [k-1]: width
  Vector rank_w;               // width
  Vector rank_b;               // 1
  Matrix chunk_w;              // 2 x width
  Vector chunk_b;              // 2
  Matrix encoder_table;        // vocab x width, empty for frozen providers

  static ModelParams zeros(const ModelConfig& cfg, int table_vocab = 0);
  static ModelParams init(const ModelConfig& cfg, uint64_t seed, int table_vocab = 0);
  static ModelParams zeros_like(const ModelParams& other);

  size_t parameter_count() const;

  template <typename Fn>
  void for_each_tensor(Fn&& fn) {
    for (int i = 0; i < static_cast<int>(conv_w.size()); ++i) {
      fn("conv_w." + std::to_string(i + 1), std::span<double>(conv_w[i].data()));
      fn("conv_b." + std::to_string(i + 1), std::span<double>(conv_b[i]));
    }
    fn(std::string("rank_w"), std::span<double>(rank_w));
    fn(std::string("rank_b"), std::span<double>(rank_b));
    fn(std::string("chunk_w"), std::span<double>(chunk_w.data()));
    fn(std::string("chunk_b"), std::span<double>(chunk_b));
    if (!encoder_table.empty())
      fn(std::string("encoder_table"), std::span<double>(encoder_table.data()));
  }
  template <typename Fn>
  void for_each_tensor(Fn&& fn) const {
    for (int i = 0; i < static_cast<int>(conv_w.size()); ++i) {
      fn("conv_w." + std::to_string(i + 1), std::span<const double>(conv_w[i].data()));
      fn("conv_b." + std::to_string(i + 1), std::span<const double>(conv_b[i]));
    }
    fn(std::string("rank_w"), std::span<const double>(rank_w));
    fn(std::string("rank_b"), std::span<const double>(rank_b));
    fn(std::string("chunk_w"), std::span<const double>(chunk_w.data()));
    fn(std::string("chunk_b"), std::span<const double>(chunk_b));
    if (!encoder_table.empty())
      fn(std::string("encoder_table"), std::span<const double>(encoder_table.data()));
  }
};

struct LossBreakdown {
  double mr_loss = 0.0;
  double bce_loss = 0.0;
  double total = 0.0;
};

// 1-D convolution over word embeddings with kernel size k, no padding, no
// nonlinearity: output row i depends on word rows [i, i + k).
Matrix ngram_convolve(const Matrix& word_emb, int k, const Matrix& weight, const Vector& bias);

// Coordinate-wise reduction over occurrence rows (S x d). For max pooling,
// argmax (first winner on ties) is recorded per coordinate when requested.
Vector pool_candidate(const Matrix& occurrence_rows, PoolingMode mode,
                      std::vector<int>* argmax = nullptr);

double rank_score(std::span<const double> emb, const Vector& weight, double bias);

std::array<double, 2> chunk_logits(std::span<const double> emb, const Matrix& weight,
                                   const Vector& bias);

double positive_probability(const std::array<double, 2>& logits);

// Mean hinge max(0, 1 - s_pos + s_neg) over all positive x negative pairs;
// zero when either side is empty.
double margin_ranking_loss(std::span<const double> pos_scores, std::span<const double> neg_scores);

// Mean over occurrences of two-way softmax cross entropy, computed from
// logits via log-sum-exp.
double chunking_bce_loss(std::span<const std::array<double, 2>> logits,
                         std::span<const int> labels);

struct ScoredCandidate {
  std::string stemmed_key;
  std::string surface;
  double rank_score = 0.0;
  std::vector<candidates::Span> occurrences;
};

// Everything backward_document needs from the forward pass.
struct ForwardCache {
  chunking::TokenizedDocument tdoc;
  Matrix word_emb;
  std::vector<Matrix> span_emb;  // [k-1], empty when N < k
  candidates::CandidateSet cands;
  std::vector<Vector> cand_emb;                  // pooled, candidate-scored modes
  std::vector<std::vector<int>> pool_argmax;     // per candidate, max mode only
  std::vector<double> cand_scores;               // candidate-level rank scores
  std::vector<std::vector<double>> occ_scores;   // per-occurrence mode only
  std::vector<std::vector<std::array<double, 2>>> occ_logits;
  std::vector<int> mr_pos, mr_neg;  // ids used for the ranking loss (see mode)
  bool has_loss = false;
};

struct ForwardResult {
  std::vector<ScoredCandidate> scored;  // candidate first-seen order, unsorted
  LossBreakdown loss;
  ForwardCache cache;  // populated when keep_cache
};

// Runs the full head over one document. `pair_rng` drives the negative
// subsample and must be set when with_loss and negatives may exceed the cap.
ForwardResult forward_document(const corpus::Document& doc, const chunking::TokenizerAdapter& tok,
                               const encoder::EmbeddingProvider& provider,
                               const ModelParams& params, const ModelConfig& cfg,
                               int max_chunk_tokens, bool with_loss, Rng* pair_rng,
                               bool keep_cache);

// Accumulates d(loss)/d(params) into grad. grad must be zeros_like-shaped;
// encoder gradients are produced only when train_encoder is set.
void backward_document(const ForwardCache& cache, const ModelParams& params,
                       const ModelConfig& cfg, bool train_encoder, ModelParams& grad);

struct RankedKeyphrase {
  std::string stemmed_key;
  std::string surface;
  double score = 0.0;
  int first_start = 0;
};

// Score desc, then earliest first occurrence, then key; unique keys in, out.
std::vector<RankedKeyphrase> rank_candidates(const std::vector<ScoredCandidate>& scored);

}  // namespace longkey::model
