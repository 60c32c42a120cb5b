#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "longkey/model.hpp"
#include "longkey/pipeline.hpp"
#include "longkey/rng.hpp"

namespace longkey::train {

struct TrainConfig {
  double learning_rate = 5e-5;
  int effective_batch = 16;
  int accumulation_steps = 16;  // micro batch = effective / accumulation
  long total_iterations = 0;    // iterations == gradient updates
  double warmup_fraction = 0.10;
  int max_tokens = 8192;  // training documents are truncated to this
  uint64_t seed = 42;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  int micro_batch() const { return effective_batch / accumulation_steps; }
  void validate() const;
};

std::string to_json_string(const TrainConfig& cfg);
TrainConfig train_config_from_json(const std::string& text);

// Linear warmup from 0 over the first warmup_fraction of iterations, then
// cosine decay to 0. Throws std::out_of_range outside [0, total).
double lr_schedule(long t, const TrainConfig& cfg);

// Decoupled weight decay Adam over the flattened parameter tensors.
class AdamW {
 public:
  explicit AdamW(const model::ModelParams& shape)
      : m_(model::ModelParams::zeros_like(shape)), v_(model::ModelParams::zeros_like(shape)) {}

  void update(model::ModelParams& params, const model::ModelParams& grad, double lr,
              const TrainConfig& cfg);

  const model::ModelParams& first_moment() const { return m_; }
  const model::ModelParams& second_moment() const { return v_; }
  model::ModelParams& first_moment() { return m_; }
  model::ModelParams& second_moment() { return v_; }
  long step_count() const { return t_; }
  void set_step_count(long t) { t_ = t; }

 private:
  model::ModelParams m_, v_;
  long t_ = 0;
};

struct TrainLogEntry {
  long iteration = 0;  // 1-based gradient update index
  double lr = 0.0;
  double mr_loss = 0.0;
  double bce_loss = 0.0;
  double total = 0.0;
};

struct Checkpoint {
  model::ModelParams params;
  model::ModelParams adam_m, adam_v;
  long adam_step = 0;
  long iteration = 0;
  std::string config_json;  // pipeline + train echo
  std::string rng_state;
};

using LogSink = std::function<void(const TrainLogEntry&)>;

// Runs total_iterations gradient updates over the dataset (seeded shuffle,
// wrap-around epochs). Deterministic given the config seed. Aborts with a
// diagnostic naming the documents of the offending batch if a loss goes
// non-finite.
Checkpoint train(const std::vector<corpus::Document>& dataset, const TrainConfig& cfg,
                 const pipeline::PipelineConfig& pipe, const LogSink& log = nullptr);

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);

std::string format_log_line(const TrainLogEntry& entry);

}  // namespace longkey::train
