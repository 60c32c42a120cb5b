#include "longkey/pipeline.hpp"

#include <json.hpp>

namespace longkey::pipeline {

using nlohmann::json;

std::string to_json_string(const PipelineConfig& cfg) {
  json j;
  j["model"] = {{"width", cfg.model.width},
                {"n_max", cfg.model.n_max},
                {"pooling", std::string(model::to_string(cfg.model.pooling))},
                {"mode", std::string(model::to_string(cfg.model.mode))},
                {"filter_punct_spans", cfg.model.filter_punct_spans},
                {"negative_cap", cfg.model.negative_cap}};
  j["provider"] = {{"name", cfg.provider.name},
                   {"width", cfg.provider.width},
                   {"context_limit", cfg.provider.context_limit},
                   {"seed", cfg.provider.seed},
                   {"vocab_size", cfg.provider.vocab_size},
                   {"global_attention", cfg.provider.global_attention},
                   {"weights_path", cfg.provider.weights_path}};
  j["tokenizer"] = {{"piece_chars", cfg.tokenizer_piece_chars}, {"vocab", cfg.tokenizer_vocab}};
  return j.dump();
}

PipelineConfig pipeline_from_json(const std::string& text) {
  json j = json::parse(text);
  PipelineConfig cfg;
  const auto& m = j.at("model");
  cfg.model.width = m.at("width").get<int>();
  cfg.model.n_max = m.at("n_max").get<int>();
  cfg.model.pooling = model::parse_pooling(m.at("pooling").get<std::string>());
  cfg.model.mode = model::parse_mode(m.at("mode").get<std::string>());
  cfg.model.filter_punct_spans = m.value("filter_punct_spans", true);
  cfg.model.negative_cap = m.value("negative_cap", 512);
  const auto& p = j.at("provider");
  cfg.provider.name = p.at("name").get<std::string>();
  cfg.provider.width = p.at("width").get<int>();
  cfg.provider.context_limit = p.at("context_limit").get<int>();
  cfg.provider.seed = p.at("seed").get<uint64_t>();
  cfg.provider.vocab_size = p.value("vocab_size", 50021);
  cfg.provider.global_attention = p.value("global_attention", std::string("cls"));
  cfg.provider.weights_path = p.value("weights_path", std::string());
  const auto& t = j.at("tokenizer");
  cfg.tokenizer_piece_chars = t.at("piece_chars").get<int>();
  cfg.tokenizer_vocab = t.at("vocab").get<int>();
  return cfg;
}

chunking::ToyTokenizer make_tokenizer(const PipelineConfig& cfg) {
  return chunking::ToyTokenizer(cfg.tokenizer_piece_chars, cfg.tokenizer_vocab);
}

std::vector<model::RankedKeyphrase> extract_document(
    const corpus::Document& doc, const chunking::TokenizerAdapter& tok,
    const encoder::EmbeddingProvider& provider, const model::ModelParams& params,
    const model::ModelConfig& cfg, int max_chunk_tokens, int top_k) {
  auto fwd = model::forward_document(doc, tok, provider, params, cfg, max_chunk_tokens,
                                     /*with_loss=*/false, nullptr, /*keep_cache=*/false);
  auto ranked = model::rank_candidates(fwd.scored);
  if (top_k > 0 && static_cast<int>(ranked.size()) > top_k) ranked.resize(top_k);
  return ranked;
}

}  // namespace longkey::pipeline
