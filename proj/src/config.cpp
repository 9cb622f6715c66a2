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

#include "relmtl/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "relmtl/error.hpp"
#include "relmtl/hash.hpp"
#include "relmtl/text_io.hpp"

namespace relmtl::cli {
namespace fs = std::filesystem;

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  KeyValueConfig cfg;
  std::vector<std::string> stack{fs::weakly_canonical(path).string()};
  cfg.parse_into(in, fs::path(path).parent_path().string(), stack);
  return cfg;
}

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& base_dir) {
  KeyValueConfig cfg;
  std::vector<std::string> stack;
  cfg.parse_into(in, base_dir, stack);
  return cfg;
}

void KeyValueConfig::parse_into(std::istream& in, const std::string& base_dir, std::vector<std::string>& stack) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.rfind("include", 0) == 0 && (body.size() > 7 && (body[7] == ' ' || body[7] == '\t'))) {
      const std::string rel(text::trim(body.substr(7)));
      const fs::path target = fs::path(base_dir.empty() ? "." : base_dir) / rel;
      const std::string key = fs::weakly_canonical(target).string();
      if (std::find(stack.begin(), stack.end(), key) != stack.end()) {
        throw ConfigError("config include cycle at '" + target.string() + "'");
      }
      std::ifstream sub(target);
      if (!sub) throw ConfigError("cannot open included config '" + target.string() + "'");
      stack.push_back(key);
      parse_into(sub, target.parent_path().string(), stack);
      stack.pop_back();
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(text::trim(body.substr(0, eq)));
    const std::string value(text::trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    entries_[key] = value;
  }
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::baseline_majority:
      return "baseline_majority";
    case Regime::baseline_logreg:
      return "baseline_logreg";
    case Regime::nn_single:
      return "nn_single";
    case Regime::self_learning:
      return "self_learning";
    case Regime::multitask:
      return "multitask";
    case Regime::multitask_self_learning:
      return "multitask_self_learning";
  }
  return "";
}

std::string_view display_name(Regime r) {
  switch (r) {
    case Regime::baseline_majority:
      return "Majority Baseline";
    case Regime::baseline_logreg:
      return "Logistic Regression";
    case Regime::nn_single:
      return "NN Baseline";
    case Regime::self_learning:
      return "Self-learning";
    case Regime::multitask:
      return "Multitask learning";
    case Regime::multitask_self_learning:
      return "Multitask learning + Self-learning";
  }
  return "";
}

Regime regime_from_string(std::string_view s) {
  for (Regime r : kAllRegimes) {
    if (to_string(r) == s) return r;
  }
  throw ConfigError("unknown regime '" + std::string(s) + "'");
}

bool is_multitask(Regime r) { return r == Regime::multitask || r == Regime::multitask_self_learning; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : text::split_on(s, ',')) {
    auto t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<data::RelationTask> parse_tasks(const std::string& s) {
  std::vector<data::RelationTask> tasks;
  for (const auto& name : split_list(s)) {
    auto rel = data::parse_relation(name);
    if (!rel || *rel == data::Relation::random) {
      throw ConfigError("unknown task '" + name + "' (expected a relation other than random)");
    }
    for (const auto& t : tasks) {
      if (t.relation == *rel) throw ConfigError("task '" + name + "' listed twice");
    }
    tasks.push_back({*rel});
  }
  return tasks;
}

namespace {

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  auto n = text::parse_uint(v);
  if (!n) throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return *n;
}

double to_real(const std::string& key, const std::string& v) {
  auto d = text::parse_double(v);
  if (!d) throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  return *d;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv) {
  ExperimentConfig c;
  for (const auto& [key, value] : kv.entries()) {
    if (key == "dataset") c.dataset = value;
    else if (key == "split_dir") c.split_dir = value;
    else if (key == "embeddings") c.embeddings = value;
    else if (key == "tasks") c.tasks = parse_tasks(value);
    else if (key == "regimes") {
      c.regimes.clear();
      for (const auto& r : split_list(value)) c.regimes.push_back(regime_from_string(r));
    } else if (key == "seeds") {
      c.seeds.clear();
      for (const auto& s : split_list(value)) c.seeds.push_back(to_uint(key, s));
    } else if (key == "hidden") {
      c.hidden.clear();
      for (const auto& h : split_list(value)) c.hidden.push_back(static_cast<std::size_t>(to_uint(key, h)));
    } else if (key == "batch_size") c.train.batch_size = to_uint(key, value);
    else if (key == "epochs") c.train.epochs = to_uint(key, value);
    else if (key == "patience") c.train.patience = to_uint(key, value);
    else if (key == "learning_rate") c.train.learning_rate = to_real(key, value);
    else if (key == "rho") c.train.rho = to_real(key, value);
    else if (key == "epsilon") c.train.epsilon = to_real(key, value);
    else if (key == "self_learn_n") c.self_learn.n_per_iteration = to_uint(key, value);
    else if (key == "self_learn_max_iterations") c.self_learn.max_iterations = to_uint(key, value);
    else if (key == "retrain_mode") {
      try {
        c.self_learn.retrain_mode = selflearn::retrain_mode_from_string(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "retrain_epochs") c.retrain_epochs = to_uint(key, value);
    else if (key == "logreg_lambda") c.logreg.l2_lambda = to_real(key, value);
    else if (key == "logreg_iterations") c.logreg.epochs = to_uint(key, value);
    else if (key == "parallel_cells") c.parallel_cells = to_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  if (const char* env = std::getenv("RELMTL_SPLIT_DIR"); env && *env) c.split_dir = env;
  if (const char* env = std::getenv("RELMTL_EMBEDDINGS"); env && *env) c.embeddings = env;

  // Paths and the scheduling switch are excluded from the hash: neither
  // changes the results.
  std::string text;
  for (const auto& [k, v] : kv.entries()) {
    if (k != "split_dir" && k != "embeddings" && k != "parallel_cells") text += k + "=" + v + "\n";
  }
  c.config_hash = to_hex(fnv1a64(text));
  return c;
}

void ExperimentConfig::validate() const {
  if (tasks.empty() || tasks.size() > 3) throw ConfigError("config: between 1 and 3 tasks are required");
  if (regimes.empty()) throw ConfigError("config: no regimes listed");
  if (seeds.empty()) throw ConfigError("config: at least one seed is required (seeds = ...)");
  for (Regime r : regimes) {
    if (is_multitask(r) && tasks.size() < 2) {
      throw ConfigError("config: regime " + std::string(to_string(r)) + " needs at least two tasks");
    }
  }
  std::set<Regime> unique(regimes.begin(), regimes.end());
  if (unique.size() != regimes.size()) throw ConfigError("config: a regime is listed twice");
  if (hidden.empty()) throw ConfigError("config: hidden must list at least one layer width");
  if (std::find(hidden.begin(), hidden.end(), 0) != hidden.end()) throw ConfigError("config: zero hidden width");
  if (train.batch_size == 0 || train.epochs == 0) throw ConfigError("config: batch_size and epochs must be >= 1");
  if (self_learn.n_per_iteration && *self_learn.n_per_iteration == 0) {
    throw ConfigError("config: self_learn_n must be >= 1");
  }
  try {
    nn::RmsPropConfig{train.learning_rate, train.rho, train.epsilon}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (split_dir.empty() || !fs::is_directory(split_dir)) {
    throw ConfigError("config: split_dir '" + split_dir + "' is not a directory");
  }
  if (!fs::exists(fs::path(split_dir) / "manifest.json")) {
    throw ConfigError("config: split_dir '" + split_dir + "' has no manifest.json");
  }
  const bool needs_embeddings = std::any_of(regimes.begin(), regimes.end(),
                                            [](Regime r) { return r != Regime::baseline_majority; });
  if (needs_embeddings && (embeddings.empty() || !fs::is_regular_file(embeddings))) {
    throw ConfigError("config: embeddings file '" + embeddings + "' not found");
  }
}

}  // namespace relmtl::cli
