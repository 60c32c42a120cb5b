#include "longkey/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace longkey::model {

PoolingMode parse_pooling(std::string_view name) {
  if (name == "max") return PoolingMode::kMax;
  if (name == "avg") return PoolingMode::kAvg;
  if (name == "sum") return PoolingMode::kSum;
  throw std::invalid_argument("unknown pooling mode: " + std::string(name));
}

ModelMode parse_mode(std::string_view name) {
  if (name == "longkey") return ModelMode::kLongkey;
  if (name == "per_occurrence_rank") return ModelMode::kPerOccurrenceRank;
  if (name == "rank_only") return ModelMode::kRankOnly;
  if (name == "chunk_only") return ModelMode::kChunkOnly;
  throw std::invalid_argument("unknown model mode: " + std::string(name));
}

std::string_view to_string(PoolingMode mode) {
  switch (mode) {
    case PoolingMode::kMax: return "max";
    case PoolingMode::kAvg: return "avg";
    case PoolingMode::kSum: return "sum";
  }
  return "?";
}

std::string_view to_string(ModelMode mode) {
  switch (mode) {
    case ModelMode::kLongkey: return "longkey";
    case ModelMode::kPerOccurrenceRank: return "per_occurrence_rank";
    case ModelMode::kRankOnly: return "rank_only";
    case ModelMode::kChunkOnly: return "chunk_only";
  }
  return "?";
}

ModelParams ModelParams::zeros(const ModelConfig& cfg, int table_vocab) {
  ModelParams p;
  p.width = cfg.width;
  p.n_max = cfg.n_max;
  const int d = cfg.width;
  for (int k = 1; k <= cfg.n_max; ++k) {
    p.conv_w.emplace_back(d, k * d);
    p.conv_b.emplace_back(d, 0.0);
  }
  p.rank_w.assign(d, 0.0);
  p.rank_b.assign(1, 0.0);
  p.chunk_w = Matrix(2, d);
  p.chunk_b.assign(2, 0.0);
  if (table_vocab > 0) p.encoder_table = Matrix(table_vocab, d);
  return p;
}

ModelParams ModelParams::init(const ModelConfig& cfg, uint64_t seed, int table_vocab) {
  ModelParams p = zeros(cfg, table_vocab);
  Rng rng(seed);
  const int d = cfg.width;
  for (int k = 1; k <= cfg.n_max; ++k) {
    double bound = 1.0 / std::sqrt(static_cast<double>(k) * d);
    for (double& v : p.conv_w[k - 1].data()) v = rng.uniform(-bound, bound);
    for (double& v : p.conv_b[k - 1]) v = rng.uniform(-bound, bound);
  }
  double head_bound = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& v : p.rank_w) v = rng.uniform(-head_bound, head_bound);
  for (double& v : p.chunk_w.data()) v = rng.uniform(-head_bound, head_bound);
  if (table_vocab > 0)
    for (double& v : p.encoder_table.data()) v = rng.uniform(-head_bound, head_bound);
  return p;
}

ModelParams ModelParams::zeros_like(const ModelParams& other) {
  ModelParams p;
  p.width = other.width;
  p.n_max = other.n_max;
  for (const auto& w : other.conv_w) p.conv_w.emplace_back(w.rows(), w.cols());
  for (const auto& b : other.conv_b) p.conv_b.emplace_back(b.size(), 0.0);
  p.rank_w.assign(other.rank_w.size(), 0.0);
  p.rank_b.assign(other.rank_b.size(), 0.0);
  p.chunk_w = Matrix(other.chunk_w.rows(), other.chunk_w.cols());
  p.chunk_b.assign(other.chunk_b.size(), 0.0);
  if (!other.encoder_table.empty())
    p.encoder_table = Matrix(other.encoder_table.rows(), other.encoder_table.cols());
  return p;
}

size_t ModelParams::parameter_count() const {
  size_t n = 0;
  for_each_tensor([&](const std::string&, std::span<const double> vals) { n += vals.size(); });
  return n;
}

Matrix ngram_convolve(const Matrix& word_emb, int k, const Matrix& weight, const Vector& bias) {
  const int n = word_emb.rows();
  const int d = word_emb.cols();
  if (k < 1) throw std::invalid_argument("ngram_convolve: k must be >= 1");
  if (weight.rows() != d || weight.cols() != k * d || static_cast<int>(bias.size()) != d)
    throw std::invalid_argument("ngram_convolve: parameter shape mismatch");
  if (n < k) return Matrix(0, d);
  Matrix out(n - k + 1, d);
  for (int i = 0; i + k <= n; ++i) {
    auto dst = out.row(i);
    for (int r = 0; r < d; ++r) {
      double acc = bias[r];
      auto wrow = weight.row(r);
      for (int j = 0; j < k; ++j) {
        auto src = word_emb.row(i + j);
        const double* w = wrow.data() + static_cast<size_t>(j) * d;
        for (int c = 0; c < d; ++c) acc += w[c] * src[c];
      }
      dst[r] = acc;
    }
  }
  return out;
}

Vector pool_candidate(const Matrix& occurrence_rows, PoolingMode mode, std::vector<int>* argmax) {
  const int s = occurrence_rows.rows();
  const int d = occurrence_rows.cols();
  if (s < 1) throw std::invalid_argument("pool_candidate: empty occurrence list");
  Vector out(d, 0.0);
  if (argmax) argmax->assign(d, 0);
  switch (mode) {
    case PoolingMode::kMax:
      for (int j = 0; j < d; ++j) {
        double best = occurrence_rows.at(0, j);
        int best_i = 0;
        for (int i = 1; i < s; ++i) {
          double v = occurrence_rows.at(i, j);
          if (v > best) {
            best = v;
            best_i = i;
          }
        }
        out[j] = best;
        if (argmax) (*argmax)[j] = best_i;
      }
      break;
    case PoolingMode::kAvg:
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < d; ++j) out[j] += occurrence_rows.at(i, j);
      for (int j = 0; j < d; ++j) out[j] /= s;
      break;
    case PoolingMode::kSum:
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < d; ++j) out[j] += occurrence_rows.at(i, j);
      break;
  }
  return out;
}

double rank_score(std::span<const double> emb, const Vector& weight, double bias) {
  if (emb.size() != weight.size())
    throw std::invalid_argument("rank_score: embedding width mismatch");
  double s = bias;
  for (size_t j = 0; j < emb.size(); ++j) s += weight[j] * emb[j];
  return s;
}

std::array<double, 2> chunk_logits(std::span<const double> emb, const Matrix& weight,
                                   const Vector& bias) {
  if (weight.rows() != 2 || weight.cols() != static_cast<int>(emb.size()) || bias.size() != 2)
    throw std::invalid_argument("chunk_logits: embedding width mismatch");
  std::array<double, 2> out{bias[0], bias[1]};
  for (int r = 0; r < 2; ++r) {
    auto w = weight.row(r);
    double acc = 0.0;
    for (size_t j = 0; j < emb.size(); ++j) acc += w[j] * emb[j];
    out[r] += acc;
  }
  return out;
}

namespace {

double log_sum_exp2(double a, double b) {
  double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

}  // namespace

double positive_probability(const std::array<double, 2>& logits) {
  return std::exp(logits[1] - log_sum_exp2(logits[0], logits[1]));
}

double margin_ranking_loss(std::span<const double> pos_scores,
                           std::span<const double> neg_scores) {
  if (pos_scores.empty() || neg_scores.empty()) return 0.0;
  double acc = 0.0;
  for (double sp : pos_scores)
    for (double sn : neg_scores) acc += std::max(0.0, 1.0 - sp + sn);
  return acc / (static_cast<double>(pos_scores.size()) * neg_scores.size());
}

double chunking_bce_loss(std::span<const std::array<double, 2>> logits,
                         std::span<const int> labels) {
  if (logits.size() != labels.size())
    throw std::invalid_argument("chunking_bce_loss: logits/labels size mismatch");
  if (logits.empty()) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    double lse = log_sum_exp2(logits[i][0], logits[i][1]);
    acc += lse - (labels[i] == 1 ? logits[i][1] : logits[i][0]);
  }
  return acc / static_cast<double>(logits.size());
}

namespace {

std::span<const double> occ_row(const ForwardCache& cache, const candidates::Span& s) {
  return cache.span_emb[s.len - 1].row(s.start);
}

}  // namespace

ForwardResult forward_document(const corpus::Document& doc, const chunking::TokenizerAdapter& tok,
                               const encoder::EmbeddingProvider& provider,
                               const ModelParams& params, const ModelConfig& cfg,
                               int max_chunk_tokens, bool with_loss, Rng* pair_rng,
                               bool keep_cache) {
  if (params.width != provider.width())
    throw std::invalid_argument("forward_document: params width differs from provider width");
  ForwardResult result;
  if (doc.words.empty()) return result;

  ForwardCache cache;
  cache.tdoc = chunking::tokenize(doc, tok, max_chunk_tokens);
  Matrix token_emb = encoder::embed_document(cache.tdoc, provider);
  cache.word_emb = encoder::select_word_embeddings(token_emb, cache.tdoc);
  const int n = cache.word_emb.rows();

  cache.span_emb.resize(cfg.n_max);
  for (int k = 1; k <= cfg.n_max; ++k)
    cache.span_emb[k - 1] = ngram_convolve(cache.word_emb, k, params.conv_w[k - 1],
                                           params.conv_b[k - 1]);

  auto spans = candidates::enumerate_spans(n, cfg.n_max);
  if (cfg.filter_punct_spans) spans = candidates::filter_spans(spans, doc);
  if (spans.empty()) return result;
  cache.cands = candidates::build_candidates(doc, spans, cfg.n_max);
  const auto& entries = cache.cands.entries;
  const size_t m = entries.size();

  const bool candidate_scored =
      cfg.mode == ModelMode::kLongkey || cfg.mode == ModelMode::kRankOnly;
  const bool wants_bce = cfg.mode != ModelMode::kRankOnly;

  // Rank-score path.
  if (candidate_scored) {
    cache.cand_emb.resize(m);
    cache.pool_argmax.resize(m);
    cache.cand_scores.resize(m);
    Matrix occ_rows;
    for (size_t l = 0; l < m; ++l) {
      const auto& occs = entries[l].occurrences;
      occ_rows = Matrix(static_cast<int>(occs.size()), params.width);
      for (size_t o = 0; o < occs.size(); ++o) {
        auto src = occ_row(cache, occs[o]);
        std::copy(src.begin(), src.end(), occ_rows.row(static_cast<int>(o)).begin());
      }
      cache.cand_emb[l] = pool_candidate(occ_rows, cfg.pooling,
                                         cfg.pooling == PoolingMode::kMax
                                             ? &cache.pool_argmax[l]
                                             : nullptr);
      cache.cand_scores[l] = rank_score(cache.cand_emb[l], params.rank_w, params.rank_b[0]);
    }
  } else if (cfg.mode == ModelMode::kPerOccurrenceRank) {
    cache.occ_scores.resize(m);
    cache.cand_scores.resize(m);
    for (size_t l = 0; l < m; ++l) {
      const auto& occs = entries[l].occurrences;
      auto& scores = cache.occ_scores[l];
      scores.resize(occs.size());
      double best = -std::numeric_limits<double>::infinity();
      for (size_t o = 0; o < occs.size(); ++o) {
        scores[o] = rank_score(occ_row(cache, occs[o]), params.rank_w, params.rank_b[0]);
        best = std::max(best, scores[o]);
      }
      cache.cand_scores[l] = best;
    }
  }

  // Chunking logits.
  if (wants_bce) {
    cache.occ_logits.resize(m);
    for (size_t l = 0; l < m; ++l) {
      const auto& occs = entries[l].occurrences;
      auto& logits = cache.occ_logits[l];
      logits.resize(occs.size());
      for (size_t o = 0; o < occs.size(); ++o)
        logits[o] = chunk_logits(occ_row(cache, occs[o]), params.chunk_w, params.chunk_b);
    }
  }
  if (cfg.mode == ModelMode::kChunkOnly) {
    cache.cand_scores.resize(m);
    for (size_t l = 0; l < m; ++l) {
      double best = 0.0;
      for (size_t o = 0; o < entries[l].occurrences.size(); ++o)
        best = std::max(best, positive_probability(cache.occ_logits[l][o]));
      cache.cand_scores[l] = best;
    }
  }

  // Losses.
  if (with_loss) {
    cache.has_loss = true;
    if (cfg.mode != ModelMode::kChunkOnly) {
      std::vector<double> flat_scores;
      std::vector<int> pos_ids, neg_ids;
      if (cfg.mode == ModelMode::kPerOccurrenceRank) {
        for (size_t l = 0; l < m; ++l)
          for (double s : cache.occ_scores[l]) {
            int id = static_cast<int>(flat_scores.size());
            flat_scores.push_back(s);
            (entries[l].label ? pos_ids : neg_ids).push_back(id);
          }
      } else {
        for (size_t l = 0; l < m; ++l) {
          flat_scores.push_back(cache.cand_scores[l]);
          (entries[l].label ? pos_ids : neg_ids).push_back(static_cast<int>(l));
        }
      }
      if (static_cast<int>(neg_ids.size()) > cfg.negative_cap) {
        if (!pair_rng)
          throw std::logic_error("forward_document: negative subsample requires an rng");
        auto picked = pair_rng->sample_indices(static_cast<int>(neg_ids.size()),
                                               cfg.negative_cap);
        std::vector<int> sub;
        sub.reserve(picked.size());
        for (int idx : picked) sub.push_back(neg_ids[idx]);
        neg_ids = std::move(sub);
      }
      std::vector<double> pos_s, neg_s;
      for (int id : pos_ids) pos_s.push_back(flat_scores[id]);
      for (int id : neg_ids) neg_s.push_back(flat_scores[id]);
      result.loss.mr_loss = margin_ranking_loss(pos_s, neg_s);
      cache.mr_pos = std::move(pos_ids);
      cache.mr_neg = std::move(neg_ids);
    }
    if (wants_bce) {
      std::vector<std::array<double, 2>> logits;
      std::vector<int> labels;
      for (size_t l = 0; l < m; ++l)
        for (const auto& lg : cache.occ_logits[l]) {
          logits.push_back(lg);
          labels.push_back(entries[l].label);
        }
      result.loss.bce_loss = chunking_bce_loss(logits, labels);
    }
    result.loss.total = result.loss.mr_loss + result.loss.bce_loss;
  }

  result.scored.reserve(m);
  for (size_t l = 0; l < m; ++l)
    result.scored.push_back({entries[l].stemmed_key, entries[l].surface, cache.cand_scores[l],
                             entries[l].occurrences});

  if (keep_cache) result.cache = std::move(cache);
  return result;
}

void backward_document(const ForwardCache& cache, const ModelParams& params,
                       const ModelConfig& cfg, bool train_encoder, ModelParams& grad) {
  if (!cache.has_loss || cache.cands.entries.empty()) return;
  const auto& entries = cache.cands.entries;
  const size_t m = entries.size();
  const int d = params.width;

  std::vector<Matrix> d_span(cfg.n_max);
  for (int k = 1; k <= cfg.n_max; ++k)
    d_span[k - 1] = Matrix(cache.span_emb[k - 1].rows(), cache.span_emb[k - 1].cols());

  // Ranking-loss gradient over the flat score vector used in forward.
  std::vector<double> d_score;
  if (cfg.mode != ModelMode::kChunkOnly && !cache.mr_pos.empty() && !cache.mr_neg.empty()) {
    size_t flat = 0;
    if (cfg.mode == ModelMode::kPerOccurrenceRank)
      for (size_t l = 0; l < m; ++l) flat += cache.occ_scores[l].size();
    else
      flat = m;
    d_score.assign(flat, 0.0);

    std::vector<double> flat_scores(flat, 0.0);
    if (cfg.mode == ModelMode::kPerOccurrenceRank) {
      size_t id = 0;
      for (size_t l = 0; l < m; ++l)
        for (double s : cache.occ_scores[l]) flat_scores[id++] = s;
    } else {
      for (size_t l = 0; l < m; ++l) flat_scores[l] = cache.cand_scores[l];
    }
    const double inv_pairs =
        1.0 / (static_cast<double>(cache.mr_pos.size()) * cache.mr_neg.size());
    for (int p : cache.mr_pos)
      for (int nid : cache.mr_neg)
        if (1.0 - flat_scores[p] + flat_scores[nid] > 0.0) {
          d_score[p] -= inv_pairs;
          d_score[nid] += inv_pairs;
        }
  }

  // Rank head and pooling backprop.
  if (!d_score.empty()) {
    if (cfg.mode == ModelMode::kPerOccurrenceRank) {
      size_t id = 0;
      for (size_t l = 0; l < m; ++l) {
        const auto& occs = entries[l].occurrences;
        for (size_t o = 0; o < occs.size(); ++o, ++id) {
          double g = d_score[id];
          if (g == 0.0) continue;
          auto h = occ_row(cache, occs[o]);
          auto dh = d_span[occs[o].len - 1].row(occs[o].start);
          for (int j = 0; j < d; ++j) {
            grad.rank_w[j] += g * h[j];
            dh[j] += g * params.rank_w[j];
          }
          grad.rank_b[0] += g;
        }
      }
    } else {
      for (size_t l = 0; l < m; ++l) {
        double g = d_score[l];
        if (g == 0.0) continue;
        const auto& occs = entries[l].occurrences;
        const auto& c_emb = cache.cand_emb[l];
        grad.rank_b[0] += g;
        const double s_count = static_cast<double>(occs.size());
        for (int j = 0; j < d; ++j) {
          grad.rank_w[j] += g * c_emb[j];
          double dc = g * params.rank_w[j];
          switch (cfg.pooling) {
            case PoolingMode::kMax: {
              const auto& occ = occs[cache.pool_argmax[l][j]];
              d_span[occ.len - 1].at(occ.start, j) += dc;
              break;
            }
            case PoolingMode::kAvg:
              for (const auto& occ : occs) d_span[occ.len - 1].at(occ.start, j) += dc / s_count;
              break;
            case PoolingMode::kSum:
              for (const auto& occ : occs) d_span[occ.len - 1].at(occ.start, j) += dc;
              break;
          }
        }
      }
    }
  }

  // Chunking BCE backprop.
  if (cfg.mode != ModelMode::kRankOnly) {
    size_t total_occ = cache.cands.total_occurrences();
    const double inv = total_occ > 0 ? 1.0 / static_cast<double>(total_occ) : 0.0;
    for (size_t l = 0; l < m; ++l) {
      const auto& occs = entries[l].occurrences;
      const int z = entries[l].label;
      for (size_t o = 0; o < occs.size(); ++o) {
        const auto& lg = cache.occ_logits[l][o];
        double p = positive_probability(lg);
        double ga = (z - p) * inv;
        double gb = (p - z) * inv;
        auto h = occ_row(cache, occs[o]);
        auto dh = d_span[occs[o].len - 1].row(occs[o].start);
        auto w0 = params.chunk_w.row(0);
        auto w1 = params.chunk_w.row(1);
        auto gw0 = grad.chunk_w.row(0);
        auto gw1 = grad.chunk_w.row(1);
        for (int j = 0; j < d; ++j) {
          gw0[j] += ga * h[j];
          gw1[j] += gb * h[j];
          dh[j] += ga * w0[j] + gb * w1[j];
        }
        grad.chunk_b[0] += ga;
        grad.chunk_b[1] += gb;
      }
    }
  }

  // Convolution backward into word embeddings.
  const int n = cache.word_emb.rows();
  Matrix d_word(n, d);
  for (int k = 1; k <= cfg.n_max; ++k) {
    const Matrix& ds = d_span[k - 1];
    if (ds.rows() == 0) continue;
    Matrix& gw = grad.conv_w[k - 1];
    Vector& gb = grad.conv_b[k - 1];
    const Matrix& w = params.conv_w[k - 1];
    for (int i = 0; i < ds.rows(); ++i) {
      auto g = ds.row(i);
      for (int r = 0; r < d; ++r) {
        double gr = g[r];
        if (gr == 0.0) continue;
        gb[r] += gr;
        auto wrow = w.row(r);
        auto gwrow = gw.row(r);
        for (int j = 0; j < k; ++j) {
          auto src = cache.word_emb.row(i + j);
          auto dsrc = d_word.row(i + j);
          const size_t off = static_cast<size_t>(j) * d;
          for (int c = 0; c < d; ++c) {
            gwrow[off + c] += gr * src[c];
            dsrc[c] += wrow[off + c] * gr;
          }
        }
      }
    }
  }

  // First-token scatter into the trainable lookup table.
  if (train_encoder && !grad.encoder_table.empty()) {
    for (int i = 0; i < n; ++i) {
      int id = cache.tdoc.token_ids[cache.tdoc.first_token_index[i]];
      auto dst = grad.encoder_table.row(id);
      auto src = d_word.row(i);
      for (int j = 0; j < d; ++j) dst[j] += src[j];
    }
  }
}

std::vector<RankedKeyphrase> rank_candidates(const std::vector<ScoredCandidate>& scored) {
  std::vector<RankedKeyphrase> out;
  out.reserve(scored.size());
  for (const auto& s : scored)
    out.push_back({s.stemmed_key, s.surface, s.rank_score,
                   s.occurrences.empty() ? 0 : s.occurrences.front().start});
  std::sort(out.begin(), out.end(), [](const RankedKeyphrase& a, const RankedKeyphrase& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.first_start != b.first_start) return a.first_start < b.first_start;
    return a.stemmed_key < b.stemmed_key;
  });
  return out;
}

}  // namespace longkey::model
