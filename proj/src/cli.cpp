#include "longkey/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "longkey/baselines.hpp"
#include "longkey/evaluation.hpp"

namespace longkey::cli {

namespace {

using nlohmann::json;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

void require_file(const std::string& field, const std::string& path) {
  if (path.empty()) throw std::invalid_argument(field + ": path is empty");
  if (!std::filesystem::exists(path))
    throw std::invalid_argument(field + ": file not found: " + path);
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
}

encoder::ProviderConfig provider_from_json(const json& p, const encoder::ProviderConfig& base) {
  encoder::ProviderConfig cfg = base;
  cfg.name = p.value("name", cfg.name);
  cfg.width = p.value("width", cfg.width);
  cfg.context_limit = p.value("context_limit", cfg.context_limit);
  cfg.seed = p.value("seed", cfg.seed);
  cfg.vocab_size = p.value("vocab_size", cfg.vocab_size);
  cfg.global_attention = p.value("global_attention", cfg.global_attention);
  cfg.weights_path = p.value("weights_path", cfg.weights_path);
  return cfg;
}

// Ranked extraction output, one JSON object per document.
void write_predictions_line(std::ostream& os, const std::string& id,
                            const std::vector<model::RankedKeyphrase>& ranked) {
  json row;
  row["id"] = id;
  json triples = json::array();
  for (const auto& kp : ranked) triples.push_back({kp.surface, kp.stemmed_key, kp.score});
  row["keyphrases"] = triples;
  os << row.dump() << '\n';
}

std::map<std::string, std::vector<std::string>> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open predictions file: " + path);
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    std::vector<std::string> keys;
    for (const auto& triple : row.at("keyphrases")) keys.push_back(triple.at(1).get<std::string>());
    out[row.at("id").get<std::string>()] = std::move(keys);
  }
  return out;
}

struct LoadedCheckpoint {
  train::Checkpoint cp;
  pipeline::PipelineConfig pipe;
};

LoadedCheckpoint open_checkpoint(const std::string& path,
                                 const std::string& provider_override_path) {
  require_file("checkpoint", path);
  LoadedCheckpoint lc{train::load_checkpoint(path), {}};
  auto echo = json::parse(lc.cp.config_json);
  lc.pipe = pipeline::pipeline_from_json(echo.at("pipeline").dump());
  if (!provider_override_path.empty()) {
    require_file("provider override", provider_override_path);
    lc.pipe.provider =
        provider_from_json(parse_json_file(provider_override_path), lc.pipe.provider);
  }
  if (lc.pipe.provider.width != lc.pipe.model.width)
    throw IncompatibilityError("provider width " + std::to_string(lc.pipe.provider.width) +
                               " does not match checkpoint model width " +
                               std::to_string(lc.pipe.model.width));
  if (lc.pipe.provider.name == "trainable_lookup" &&
      lc.cp.params.encoder_table.rows() != lc.pipe.provider.vocab_size)
    throw IncompatibilityError("checkpoint lookup table has " +
                               std::to_string(lc.cp.params.encoder_table.rows()) +
                               " rows but provider expects " +
                               std::to_string(lc.pipe.provider.vocab_size));
  return lc;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  json j = parse_json_file(path);
  RunConfig cfg;

  if (j.contains("model")) {
    const auto& m = j["model"];
    cfg.pipe.model.width = m.value("width", cfg.pipe.model.width);
    cfg.pipe.model.n_max = m.value("n_max", cfg.pipe.model.n_max);
    if (m.contains("pooling")) cfg.pipe.model.pooling = model::parse_pooling(m["pooling"].get<std::string>());
    if (m.contains("mode")) cfg.pipe.model.mode = model::parse_mode(m["mode"].get<std::string>());
    cfg.pipe.model.filter_punct_spans = m.value("filter_punct_spans", true);
    cfg.pipe.model.negative_cap = m.value("negative_cap", 512);
  }
  if (j.contains("provider"))
    cfg.pipe.provider = provider_from_json(j["provider"], cfg.pipe.provider);
  if (j.contains("tokenizer")) {
    cfg.pipe.tokenizer_piece_chars = j["tokenizer"].value("piece_chars", 4);
    cfg.pipe.tokenizer_vocab = j["tokenizer"].value("vocab", 50021);
  }
  if (j.contains("train")) cfg.train_cfg = train::train_config_from_json(j["train"].dump());
  if (j.contains("dataset")) cfg.train_dataset = j["dataset"].value("train", std::string());
  if (j.contains("output")) {
    cfg.checkpoint_path = j["output"].value("checkpoint", cfg.checkpoint_path);
    cfg.log_path = j["output"].value("log", cfg.log_path);
  }
  cfg.seed = j.value("seed", cfg.seed);

  cfg.train_dataset = env_or("LONGKEY_TRAIN_DATASET", cfg.train_dataset);
  cfg.checkpoint_path = env_or("LONGKEY_CHECKPOINT", cfg.checkpoint_path);
  cfg.log_path = env_or("LONGKEY_LOG", cfg.log_path);
  if (const char* s = std::getenv("LONGKEY_SEED")) cfg.seed = std::strtoull(s, nullptr, 10);
  return cfg;
}

int cmd_train(const std::string& config_path, const TrainOverrides& overrides) {
  require_file("config", config_path);
  RunConfig cfg = load_run_config(config_path);
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.checkpoint_path) cfg.checkpoint_path = *overrides.checkpoint_path;
  if (overrides.log_path) cfg.log_path = *overrides.log_path;

  cfg.train_cfg.seed = cfg.seed;
  cfg.train_cfg.validate();
  require_file("dataset.train", cfg.train_dataset);
  if (cfg.pipe.provider.width != cfg.pipe.model.width)
    throw std::invalid_argument("provider.width must equal model.width");
  if (cfg.pipe.provider.name == "trainable_lookup" &&
      cfg.pipe.provider.vocab_size != cfg.pipe.tokenizer_vocab)
    throw std::invalid_argument(
        "provider.vocab_size must equal tokenizer.vocab for trainable_lookup");

  auto docs = corpus::load_jsonl(cfg.train_dataset);
  std::ofstream log(cfg.log_path);
  if (!log) throw std::invalid_argument("cannot write log file: " + cfg.log_path);
  auto cp = train::train(docs, cfg.train_cfg, cfg.pipe, [&](const train::TrainLogEntry& e) {
    log << train::format_log_line(e) << '\n';
  });
  train::save_checkpoint(cfg.checkpoint_path, cp);
  std::cout << cfg.checkpoint_path << '\n';
  return kExitOk;
}

int cmd_extract(const std::string& checkpoint_path, const std::string& input_path, int top_k,
                const std::string& output_path, const std::string& provider_override_path) {
  if (top_k < 1) throw std::invalid_argument("--top-k must be >= 1");
  require_file("input", input_path);
  auto lc = open_checkpoint(checkpoint_path, provider_override_path);

  auto tokenizer = pipeline::make_tokenizer(lc.pipe);
  auto provider = encoder::make_provider(lc.pipe.provider, &lc.cp.params.encoder_table);
  std::ofstream out(output_path);
  if (!out) throw std::invalid_argument("cannot write output file: " + output_path);

  corpus::JsonlReader reader(input_path);
  while (auto doc = reader.next()) {
    auto ranked = pipeline::extract_document(*doc, tokenizer, *provider, lc.cp.params,
                                             lc.pipe.model, provider->context_limit(), top_k);
    write_predictions_line(out, doc->id, ranked);
  }
  return kExitOk;
}

int cmd_evaluate(const EvaluateArgs& args) {
  require_file("dataset", args.dataset_path);
  if (args.checkpoint_path.empty() == args.predictions_path.empty())
    throw std::invalid_argument("exactly one of --checkpoint or --predictions is required");
  if (args.ks.empty()) throw std::invalid_argument("--ks must list at least one K");

  auto docs = corpus::load_jsonl(args.dataset_path);
  if (docs.empty()) throw std::invalid_argument("dataset is empty: " + args.dataset_path);

  std::vector<evaluation::DocEval> evals;
  evals.reserve(docs.size());
  if (!args.predictions_path.empty()) {
    require_file("predictions", args.predictions_path);
    auto preds = read_predictions(args.predictions_path);
    for (const auto& doc : docs) {
      evaluation::DocEval de;
      de.id = doc.id;
      de.truth = doc.truth_keys();
      if (auto it = preds.find(doc.id); it != preds.end()) de.predicted = it->second;
      evals.push_back(std::move(de));
    }
  } else {
    auto lc = open_checkpoint(args.checkpoint_path, "");
    auto tokenizer = pipeline::make_tokenizer(lc.pipe);
    auto provider = encoder::make_provider(lc.pipe.provider, &lc.cp.params.encoder_table);
    for (const auto& doc : docs) {
      auto ranked = pipeline::extract_document(doc, tokenizer, *provider, lc.cp.params,
                                               lc.pipe.model, provider->context_limit(), 100);
      evaluation::DocEval de;
      de.id = doc.id;
      de.truth = doc.truth_keys();
      for (const auto& kp : ranked) de.predicted.push_back(kp.stemmed_key);
      evals.push_back(std::move(de));
    }
  }

  evaluation::EvalConfig ecfg;
  ecfg.ks = args.ks;
  ecfg.micro = args.micro;
  ecfg.per_document = !args.per_doc_csv_path.empty();
  auto report = evaluation::evaluate(evals, ecfg);

  std::cout << evaluation::summary_table(report);
  if (!args.report_path.empty()) {
    std::ofstream out(args.report_path);
    if (!out) throw std::invalid_argument("cannot write report file: " + args.report_path);
    out << evaluation::to_json_string(report) << '\n';
  }
  if (!args.per_doc_csv_path.empty()) {
    std::ofstream csv(args.per_doc_csv_path);
    if (!csv) throw std::invalid_argument("cannot write csv file: " + args.per_doc_csv_path);
    csv << "id,truth_size,predicted_size,f1_at_oracle\n";
    csv.precision(17);
    for (const auto& rec : report.per_document)
      csv << rec.id << ',' << rec.truth_size << ',' << rec.predicted_size << ','
          << rec.f1_at_oracle << '\n';
  }
  return kExitOk;
}

int cmd_baseline(const std::string& method, const std::string& dataset_path,
                 const std::string& output_path, int n_max, int top_k) {
  if (method != "tfidf" && method != "textrank")
    throw std::invalid_argument("--method must be tfidf or textrank");
  require_file("dataset", dataset_path);
  auto docs = corpus::load_jsonl(dataset_path);
  if (docs.empty()) throw std::invalid_argument("dataset is empty: " + dataset_path);

  std::ofstream out(output_path);
  if (!out) throw std::invalid_argument("cannot write output file: " + output_path);

  if (method == "tfidf") {
    auto stats = baselines::build_corpus_stats(docs);
    for (const auto& doc : docs) {
      auto ranked = baselines::tfidf_extract(doc, stats, n_max);
      if (static_cast<int>(ranked.size()) > top_k) ranked.resize(top_k);
      write_predictions_line(out, doc.id, ranked);
    }
  } else {
    for (const auto& doc : docs) {
      auto ranked = baselines::textrank_extract(doc, n_max);
      if (static_cast<int>(ranked.size()) > top_k) ranked.resize(top_k);
      write_predictions_line(out, doc.id, ranked);
    }
  }
  return kExitOk;
}

}  // namespace longkey::cli
