// Copyright 2026 The relmtl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relmtl/checkpoint.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "relmtl/error.hpp"
#include "relmtl/text_io.hpp"

namespace relmtl::mtl {
namespace {

void write_values(std::ostream& out, std::string_view tag, std::span<const double> values) {
  out << tag;
  for (double v : values) out << ' ' << text::format_double(v);
  out << '\n';
}

void write_layer(std::ostream& out, const nn::DenseLayer& layer, const nn::LayerOptimizer& opt) {
  out << "layer " << nn::to_string(layer.activation) << ' ' << layer.out_dim() << ' ' << layer.in_dim() << '\n';
  const auto& c = opt.weights.config;
  out << "optimizer " << text::format_double(c.learning_rate) << ' ' << text::format_double(c.rho) << ' '
      << text::format_double(c.epsilon) << '\n';
  write_values(out, "weights", layer.weights.values());
  write_values(out, "biases", layer.biases);
  write_values(out, "cache_weights", opt.weights.cache);
  write_values(out, "cache_biases", opt.biases.cache);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next line split into whitespace fields; the first must equal `tag`.
  std::vector<std::string_view> expect(std::string_view tag) {
    if (!fill()) {
      throw FormatError("checkpoint: unexpected end of file, expected '" + std::string(tag) + "'", line_no_ + 1);
    }
    buffered_ = false;
    auto fields = text::split_ws(text::chomp(line_));
    if (fields.empty() || fields.front() != tag) {
      throw FormatError("checkpoint: expected '" + std::string(tag) + "'", line_no_);
    }
    fields.erase(fields.begin());
    return fields;
  }

  // True if the next line starts with `tag`; does not consume it.
  bool next_is(std::string_view tag) {
    if (!fill()) return false;
    auto fields = text::split_ws(text::chomp(line_));
    return !fields.empty() && fields.front() == tag;
  }

  std::size_t count(std::string_view field) {
    auto v = text::parse_uint(field);
    if (!v) fail("bad integer '" + std::string(field) + "'");
    return static_cast<std::size_t>(*v);
  }

  double real(std::string_view field) {
    auto v = text::parse_double(field);
    if (!v) fail("bad number '" + std::string(field) + "'");
    return *v;
  }

  std::vector<double> values(std::string_view tag, std::size_t n) {
    auto fields = expect(tag);
    if (fields.size() != n) {
      fail(std::string(tag) + ": expected " + std::to_string(n) + " values, got " + std::to_string(fields.size()));
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = real(fields[k]);
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw FormatError("checkpoint: " + msg, line_no_); }

 private:
  bool fill() {
    if (buffered_) return true;
    if (!std::getline(in_, line_)) return false;
    ++line_no_;
    buffered_ = true;
    return true;
  }

  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
  bool buffered_ = false;
};

void read_layer(Reader& r, nn::DenseLayer& layer, nn::LayerOptimizer& opt) {
  auto head = r.expect("layer");
  if (head.size() != 3) r.fail("layer: expected activation, out_dim, in_dim");
  nn::Activation act;
  try {
    act = nn::activation_from_string(head[0]);
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  const std::size_t out_dim = r.count(head[1]);
  const std::size_t in_dim = r.count(head[2]);
  if (out_dim == 0 || in_dim == 0) r.fail("layer: dimensions must be positive");

  auto cfg_fields = r.expect("optimizer");
  if (cfg_fields.size() != 3) r.fail("optimizer: expected learning_rate, rho, epsilon");
  nn::RmsPropConfig cfg{r.real(cfg_fields[0]), r.real(cfg_fields[1]), r.real(cfg_fields[2])};

  layer.activation = act;
  layer.weights = Matrix(out_dim, in_dim);
  auto w = r.values("weights", out_dim * in_dim);
  std::copy(w.begin(), w.end(), layer.weights.values().begin());
  layer.biases = r.values("biases", out_dim);
  opt.weights = nn::RmsPropState(cfg, 0);
  opt.biases = nn::RmsPropState(cfg, 0);
  opt.weights.cache = r.values("cache_weights", out_dim * in_dim);
  opt.biases.cache = r.values("cache_biases", out_dim);
}

}  // namespace

void save_checkpoint(std::ostream& out, const MultiTaskModel& model, const std::optional<TrainConfig>& config) {
  out << "relmtl-checkpoint " << kCheckpointVersion << '\n';
  out << "input_dim " << model.input_dim << '\n';
  if (config) {
    out << "train batch_size " << config->batch_size << " epochs " << config->epochs << " patience "
        << config->patience << " seed " << config->seed << " learning_rate "
        << text::format_double(config->learning_rate) << " rho " << text::format_double(config->rho)
        << " epsilon " << text::format_double(config->epsilon) << '\n';
  }
  out << "trunk " << model.trunk.size() << '\n';
  for (std::size_t l = 0; l < model.trunk.size(); ++l) write_layer(out, model.trunk[l], model.trunk_optimizer[l]);
  out << "heads " << model.heads.size() << '\n';
  for (std::size_t l = 0; l < model.heads.size(); ++l) write_layer(out, model.heads[l], model.head_optimizer[l]);
  out << "end\n";
}

Checkpoint load_checkpoint(std::istream& in) {
  Reader r(in);
  auto magic = r.expect("relmtl-checkpoint");
  if (magic.size() != 1 || r.count(magic[0]) != static_cast<std::size_t>(kCheckpointVersion)) {
    r.fail("unsupported checkpoint version");
  }
  Checkpoint ck;
  auto dim = r.expect("input_dim");
  if (dim.size() != 1) r.fail("input_dim: expected one value");
  ck.model.input_dim = r.count(dim[0]);

  if (r.next_is("train")) {
    auto f = r.expect("train");
    if (f.size() != 14) r.fail("train: expected 7 key/value pairs");
    TrainConfig cfg;
    for (std::size_t k = 0; k + 1 < f.size(); k += 2) {
      const auto key = f[k];
      const auto val = f[k + 1];
      if (key == "batch_size") cfg.batch_size = r.count(val);
      else if (key == "epochs") cfg.epochs = r.count(val);
      else if (key == "patience") cfg.patience = r.count(val);
      else if (key == "seed") cfg.seed = r.count(val);
      else if (key == "learning_rate") cfg.learning_rate = r.real(val);
      else if (key == "rho") cfg.rho = r.real(val);
      else if (key == "epsilon") cfg.epsilon = r.real(val);
      else r.fail("train: unknown key '" + std::string(key) + "'");
    }
    ck.config = cfg;
  }

  auto trunk = r.expect("trunk");
  if (trunk.size() != 1) r.fail("trunk: expected a count");
  const std::size_t n_trunk = r.count(trunk[0]);
  ck.model.trunk.resize(n_trunk);
  ck.model.trunk_optimizer.resize(n_trunk);
  for (std::size_t l = 0; l < n_trunk; ++l) read_layer(r, ck.model.trunk[l], ck.model.trunk_optimizer[l]);

  auto heads = r.expect("heads");
  if (heads.size() != 1) r.fail("heads: expected a count");
  const std::size_t n_heads = r.count(heads[0]);
  if (n_heads == 0) r.fail("heads: a model needs at least one head");
  ck.model.heads.resize(n_heads);
  ck.model.head_optimizer.resize(n_heads);
  for (std::size_t l = 0; l < n_heads; ++l) read_layer(r, ck.model.heads[l], ck.model.head_optimizer[l]);
  r.expect("end");

  std::size_t width = ck.model.input_dim;
  for (const auto& l : ck.model.trunk) {
    if (l.in_dim() != width) r.fail("trunk layer widths do not chain");
    width = l.out_dim();
  }
  for (const auto& h : ck.model.heads) {
    if (h.in_dim() != width) r.fail("head input width does not match the trunk");
  }
  return ck;
}

}  // namespace relmtl::mtl
