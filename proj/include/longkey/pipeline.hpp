#pragma once

#include <memory>
#include <string>
#include <vector>

#include "longkey/chunking.hpp"
#include "longkey/encoder.hpp"
#include "longkey/model.hpp"

namespace longkey::pipeline {

// Everything needed to rebuild the inference path: model head shape, the
// embedding provider plugin block and the tokenizer settings.
struct PipelineConfig {
  model::ModelConfig model;
  encoder::ProviderConfig provider;
  int tokenizer_piece_chars = 4;
  int tokenizer_vocab = 50021;
};

std::string to_json_string(const PipelineConfig& cfg);
PipelineConfig pipeline_from_json(const std::string& text);

chunking::ToyTokenizer make_tokenizer(const PipelineConfig& cfg);

// Ranked top_k keyphrases for one document (top_k <= 0 means all).
std::vector<model::RankedKeyphrase> extract_document(
    const corpus::Document& doc, const chunking::TokenizerAdapter& tok,
    const encoder::EmbeddingProvider& provider, const model::ModelParams& params,
    const model::ModelConfig& cfg, int max_chunk_tokens, int top_k);

}  // namespace longkey::pipeline
