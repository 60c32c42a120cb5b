#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "longkey/pipeline.hpp"
#include "longkey/trainer.hpp"

namespace longkey::cli {

// Exit codes: 0 success, 2 config/input error, 3 incompatibility.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIncompatible = 3;

struct IncompatibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  uint64_t seed = 42;
  std::string train_dataset;
  pipeline::PipelineConfig pipe;
  train::TrainConfig train_cfg;
  std::string checkpoint_path = "longkey.ckpt";
  std::string log_path = "train.log";
};

// JSON config file with LONGKEY_* environment overrides applied on top
// (LONGKEY_TRAIN_DATASET, LONGKEY_CHECKPOINT, LONGKEY_LOG, LONGKEY_SEED).
RunConfig load_run_config(const std::string& path);

struct TrainOverrides {
  std::optional<uint64_t> seed;
  std::optional<std::string> checkpoint_path;
  std::optional<std::string> log_path;
};

int cmd_train(const std::string& config_path, const TrainOverrides& overrides = {});

int cmd_extract(const std::string& checkpoint_path, const std::string& input_path, int top_k,
                const std::string& output_path, const std::string& provider_override_path = "");

struct EvaluateArgs {
  std::string dataset_path;
  std::string checkpoint_path;    // exactly one of checkpoint/predictions
  std::string predictions_path;
  std::vector<int> ks;
  std::string report_path;        // empty: print only
  std::string per_doc_csv_path;   // empty: skip
  bool micro = false;
};

int cmd_evaluate(const EvaluateArgs& args);

int cmd_baseline(const std::string& method, const std::string& dataset_path,
                 const std::string& output_path, int n_max = 5, int top_k = 100);

}  // namespace longkey::cli
