#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "longkey/cli.hpp"

namespace cli = longkey::cli;

int main(int argc, char** argv) {
  CLI::App app{"Keyphrase extraction for long documents: chunked encoding, span "
               "convolutions, max-pooled candidate embeddings, joint rank/chunk training."};
  app.require_subcommand(1);

  // train
  std::string train_config;
  cli::TrainOverrides overrides;
  uint64_t seed_flag = 0;
  std::string ckpt_flag, log_flag;
  auto* train = app.add_subcommand("train", "Train a model from a JSON config");
  train->add_option("--config", train_config, "Run config path")->required();
  auto* seed_opt = train->add_option("--seed", seed_flag, "Override config seed");
  auto* ckpt_opt = train->add_option("--output", ckpt_flag, "Override checkpoint path");
  auto* log_opt = train->add_option("--log", log_flag, "Override training log path");

  // extract
  std::string ex_checkpoint, ex_input, ex_output, ex_provider;
  int ex_top_k = 10;
  auto* extract = app.add_subcommand("extract", "Rank keyphrases for each document");
  extract->add_option("--checkpoint", ex_checkpoint, "Checkpoint path")->required();
  extract->add_option("--input", ex_input, "Input JSONL dataset")->required();
  extract->add_option("--top-k", ex_top_k, "Keyphrases per document");
  extract->add_option("--output", ex_output, "Output JSONL path")->required();
  extract->add_option("--provider", ex_provider, "Provider plugin config override (JSON)");

  // evaluate
  cli::EvaluateArgs ev;
  std::string ks_csv = "4,5,6";
  auto* evaluate = app.add_subcommand("evaluate", "Score ranked predictions against a dataset");
  evaluate->add_option("--dataset", ev.dataset_path, "Dataset JSONL")->required();
  evaluate->add_option("--checkpoint", ev.checkpoint_path, "Checkpoint to run");
  evaluate->add_option("--predictions", ev.predictions_path, "Pre-computed predictions JSONL");
  evaluate->add_option("--ks", ks_csv, "Comma-separated K values (default 4,5,6)");
  evaluate->add_option("--report", ev.report_path, "Write the JSON report here");
  evaluate->add_option("--per-doc", ev.per_doc_csv_path, "Write per-document CSV here");
  evaluate->add_flag("--micro", ev.micro, "Micro averaging instead of macro");

  // baseline
  std::string bl_method, bl_dataset, bl_output;
  int bl_n_max = 5, bl_top_k = 100;
  auto* baseline = app.add_subcommand("baseline", "Unsupervised extraction (tfidf or textrank)");
  baseline->add_option("--method", bl_method, "tfidf or textrank")->required();
  baseline->add_option("--dataset", bl_dataset, "Dataset JSONL")->required();
  baseline->add_option("--output", bl_output, "Output JSONL path")->required();
  baseline->add_option("--n-max", bl_n_max, "Maximum keyphrase length in words");
  baseline->add_option("--top-k", bl_top_k, "Keyphrases per document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitConfig;
  }

  try {
    if (*train) {
      if (*seed_opt) overrides.seed = seed_flag;
      if (*ckpt_opt) overrides.checkpoint_path = ckpt_flag;
      if (*log_opt) overrides.log_path = log_flag;
      return cli::cmd_train(train_config, overrides);
    }
    if (*extract)
      return cli::cmd_extract(ex_checkpoint, ex_input, ex_top_k, ex_output, ex_provider);
    if (*evaluate) {
      ev.ks.clear();
      std::stringstream ss(ks_csv);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) ev.ks.push_back(std::stoi(item));
      }
      return cli::cmd_evaluate(ev);
    }
    if (*baseline) return cli::cmd_baseline(bl_method, bl_dataset, bl_output, bl_n_max, bl_top_k);
  } catch (const cli::IncompatibilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitIncompatible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  return cli::kExitConfig;
}
