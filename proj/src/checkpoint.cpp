#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "longkey/trainer.hpp"

namespace longkey::train {

namespace {

constexpr char kMagic[8] = {'L', 'G', 'K', 'Y', 'C', 'K', 'P', '1'};

void write_u64(std::ostream& os, uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

uint64_t read_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_string(std::ostream& os, const std::string& s) {
  write_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
  uint64_t len = read_u64(is);
  std::string s(len, '\0');
  is.read(s.data(), static_cast<std::streamsize>(len));
  if (!is) throw std::runtime_error("checkpoint: truncated string");
  return s;
}

void write_params(std::ostream& os, const model::ModelParams& params) {
  uint64_t count = 0;
  params.for_each_tensor([&](const std::string&, std::span<const double>) { ++count; });
  write_u64(os, count);
  params.for_each_tensor([&](const std::string& name, std::span<const double> vals) {
    write_string(os, name);
    write_u64(os, vals.size());
    for (double v : vals) {
      uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      write_u64(os, bits);
    }
  });
}

void read_params(std::istream& is, model::ModelParams& params) {
  uint64_t count = read_u64(is);
  uint64_t expected = 0;
  params.for_each_tensor([&](const std::string&, std::span<double>) { ++expected; });
  if (count != expected) throw std::runtime_error("checkpoint: tensor count mismatch");
  params.for_each_tensor([&](const std::string& name, std::span<double> vals) {
    std::string stored = read_string(is);
    if (stored != name)
      throw std::runtime_error("checkpoint: tensor order mismatch, expected " + name +
                               " but found " + stored);
    uint64_t n = read_u64(is);
    if (n != vals.size()) throw std::runtime_error("checkpoint: tensor size mismatch for " + name);
    for (auto& v : vals) {
      uint64_t bits = read_u64(is);
      std::memcpy(&v, &bits, sizeof(bits));
    }
  });
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_string(os, cp.config_json);
  write_u64(os, static_cast<uint64_t>(cp.iteration));
  write_u64(os, static_cast<uint64_t>(cp.adam_step));
  write_string(os, cp.rng_state);
  write_params(os, cp.params);
  write_params(os, cp.adam_m);
  write_params(os, cp.adam_v);
  if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);

  Checkpoint cp;
  cp.config_json = read_string(is);
  cp.iteration = static_cast<long>(read_u64(is));
  cp.adam_step = static_cast<long>(read_u64(is));
  cp.rng_state = read_string(is);

  auto echo = nlohmann::json::parse(cp.config_json);
  auto pipe = pipeline::pipeline_from_json(echo.at("pipeline").dump());
  const bool trainable = pipe.provider.name == "trainable_lookup";
  cp.params = model::ModelParams::zeros(pipe.model, trainable ? pipe.provider.vocab_size : 0);
  cp.adam_m = model::ModelParams::zeros_like(cp.params);
  cp.adam_v = model::ModelParams::zeros_like(cp.params);
  read_params(is, cp.params);
  read_params(is, cp.adam_m);
  read_params(is, cp.adam_v);
  return cp;
}

}  // namespace longkey::train
