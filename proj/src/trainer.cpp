#include "longkey/trainer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace longkey::train {

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
  if (total_iterations < 1) throw std::invalid_argument("train: total_iterations must be >= 1");
  if (warmup_fraction <= 0.0 || warmup_fraction >= 1.0)
    throw std::invalid_argument("train: warmup_fraction must be in (0, 1)");
  if (accumulation_steps < 1 || effective_batch < 1 ||
      effective_batch % accumulation_steps != 0)
    throw std::invalid_argument(
        "train: effective_batch must be a positive multiple of accumulation_steps");
  if (max_tokens < 1) throw std::invalid_argument("train: max_tokens must be >= 1");
}

std::string to_json_string(const TrainConfig& cfg) {
  nlohmann::json j;
  j["learning_rate"] = cfg.learning_rate;
  j["effective_batch"] = cfg.effective_batch;
  j["accumulation_steps"] = cfg.accumulation_steps;
  j["total_iterations"] = cfg.total_iterations;
  j["warmup_fraction"] = cfg.warmup_fraction;
  j["max_tokens"] = cfg.max_tokens;
  j["seed"] = cfg.seed;
  j["weight_decay"] = cfg.weight_decay;
  j["beta1"] = cfg.beta1;
  j["beta2"] = cfg.beta2;
  j["adam_eps"] = cfg.adam_eps;
  return j.dump();
}

TrainConfig train_config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TrainConfig cfg;
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.effective_batch = j.value("effective_batch", cfg.effective_batch);
  cfg.accumulation_steps = j.value("accumulation_steps", cfg.accumulation_steps);
  cfg.total_iterations = j.value("total_iterations", cfg.total_iterations);
  cfg.warmup_fraction = j.value("warmup_fraction", cfg.warmup_fraction);
  cfg.max_tokens = j.value("max_tokens", cfg.max_tokens);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.weight_decay = j.value("weight_decay", cfg.weight_decay);
  cfg.beta1 = j.value("beta1", cfg.beta1);
  cfg.beta2 = j.value("beta2", cfg.beta2);
  cfg.adam_eps = j.value("adam_eps", cfg.adam_eps);
  return cfg;
}

double lr_schedule(long t, const TrainConfig& cfg) {
  if (t < 0 || t >= cfg.total_iterations)
    throw std::out_of_range("lr_schedule: iteration outside [0, total_iterations)");
  long warmup = std::max<long>(1, std::lround(cfg.warmup_fraction * cfg.total_iterations));
  if (t < warmup)
    return cfg.learning_rate * static_cast<double>(t) / static_cast<double>(warmup);
  double progress =
      static_cast<double>(t - warmup) / static_cast<double>(cfg.total_iterations - warmup);
  return cfg.learning_rate * 0.5 * (1.0 + std::cos(M_PI * progress));
}

void AdamW::update(model::ModelParams& params, const model::ModelParams& grad, double lr,
                   const TrainConfig& cfg) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));

  // Walk all tensors in lockstep; shapes match by construction.
  struct Slot {
    std::span<double> p, m, v;
    std::span<const double> g;
  };
  std::vector<Slot> slots;
  size_t idx = 0;
  params.for_each_tensor([&](const std::string&, std::span<double> p) {
    slots.push_back({p, {}, {}, {}});
    ++idx;
  });
  idx = 0;
  m_.for_each_tensor([&](const std::string&, std::span<double> m) { slots[idx++].m = m; });
  idx = 0;
  v_.for_each_tensor([&](const std::string&, std::span<double> v) { slots[idx++].v = v; });
  idx = 0;
  grad.for_each_tensor(
      [&](const std::string&, std::span<const double> g) { slots[idx++].g = g; });

  for (auto& s : slots) {
    for (size_t i = 0; i < s.p.size(); ++i) {
      double g = s.g[i];
      s.m[i] = cfg.beta1 * s.m[i] + (1.0 - cfg.beta1) * g;
      s.v[i] = cfg.beta2 * s.v[i] + (1.0 - cfg.beta2) * g * g;
      double mhat = s.m[i] / bc1;
      double vhat = s.v[i] / bc2;
      s.p[i] -= lr * (mhat / (std::sqrt(vhat) + cfg.adam_eps) + cfg.weight_decay * s.p[i]);
    }
  }
}

Checkpoint train(const std::vector<corpus::Document>& dataset, const TrainConfig& cfg,
                 const pipeline::PipelineConfig& pipe, const LogSink& log) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");

  Rng rng(cfg.seed);
  const bool trainable = pipe.provider.name == "trainable_lookup";
  auto params = model::ModelParams::init(pipe.model, rng.next_u64(),
                                         trainable ? pipe.provider.vocab_size : 0);
  auto provider = encoder::make_provider(pipe.provider, &params.encoder_table);
  auto tokenizer = pipeline::make_tokenizer(pipe);

  // Truncate once up front; inference-time chunking is not used in training.
  std::vector<corpus::Document> docs;
  docs.reserve(dataset.size());
  for (const auto& doc : dataset)
    docs.push_back(chunking::truncate_to_tokens(doc, tokenizer, cfg.max_tokens));

  std::vector<size_t> order(docs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  size_t cursor = 0;

  AdamW adam(params);
  const int docs_per_update = cfg.effective_batch;
  for (long u = 0; u < cfg.total_iterations; ++u) {
    double lr = lr_schedule(u, cfg);
    auto grad = model::ModelParams::zeros_like(params);
    double mr = 0.0, bce = 0.0, total = 0.0;
    std::vector<std::string> batch_ids;
    for (int b = 0; b < docs_per_update; ++b) {
      if (cursor == order.size()) {
        rng.shuffle(order);
        cursor = 0;
      }
      const auto& doc = docs[order[cursor++]];
      batch_ids.push_back(doc.id);
      auto fwd = model::forward_document(doc, tokenizer, *provider, params, pipe.model,
                                         provider->context_limit(), /*with_loss=*/true, &rng,
                                         /*keep_cache=*/true);
      if (!std::isfinite(fwd.loss.total)) {
        std::ostringstream os;
        os << "non-finite loss at iteration " << (u + 1) << " on documents [";
        for (size_t i = 0; i < batch_ids.size(); ++i)
          os << (i ? ", " : "") << batch_ids[i];
        os << "]";
        throw std::runtime_error(os.str());
      }
      model::backward_document(fwd.cache, params, pipe.model, trainable, grad);
      mr += fwd.loss.mr_loss;
      bce += fwd.loss.bce_loss;
      total += fwd.loss.total;
    }
    const double inv = 1.0 / docs_per_update;
    grad.for_each_tensor([&](const std::string&, std::span<double> g) {
      for (double& x : g) x *= inv;
    });
    adam.update(params, grad, lr, cfg);
    if (log) log({u + 1, lr, mr * inv, bce * inv, total * inv});
  }

  Checkpoint cp;
  cp.adam_m = adam.first_moment();
  cp.adam_v = adam.second_moment();
  cp.adam_step = adam.step_count();
  cp.params = std::move(params);
  cp.iteration = cfg.total_iterations;
  nlohmann::json echo;
  echo["pipeline"] = nlohmann::json::parse(pipeline::to_json_string(pipe));
  echo["train"] = nlohmann::json::parse(to_json_string(cfg));
  cp.config_json = echo.dump();
  std::ostringstream state;
  rng.save(state);
  cp.rng_state = state.str();
  return cp;
}

std::string format_log_line(const TrainLogEntry& entry) {
  std::ostringstream os;
  os.precision(17);
  os << entry.iteration << '\t' << entry.lr << '\t' << entry.mr_loss << '\t' << entry.bce_loss
     << '\t' << entry.total;
  return os.str();
}

}  // namespace longkey::train
