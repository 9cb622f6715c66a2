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

#ifndef RELMTL_CONFIG_HPP_
#define RELMTL_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relmtl/logreg.hpp"
#include "relmtl/multitask.hpp"
#include "relmtl/pairs.hpp"
#include "relmtl/selflearn.hpp"

namespace relmtl::cli {

/// Flat `key = value` configuration.
///
///   # comment
///   include shared/hyper.cfg     (path relative to the including file)
///   epochs = 200
///
/// Later assignments override earlier ones, so keys set after an include
/// override the included block. Include cycles are rejected.
class KeyValueConfig {
 public:
  static KeyValueConfig load(const std::string& path);
  static KeyValueConfig parse(std::istream& in, const std::string& base_dir = ".");

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  /// Sorted `key=value` lines; the config hash is taken over this text.
  std::string canonical() const;

 private:
  void parse_into(std::istream& in, const std::string& base_dir, std::vector<std::string>& stack);

  std::map<std::string, std::string> entries_;
};

enum class Regime {
  baseline_majority,
  baseline_logreg,
  nn_single,
  self_learning,
  multitask,
  multitask_self_learning,
};

inline constexpr Regime kAllRegimes[] = {Regime::baseline_majority, Regime::baseline_logreg,
                                         Regime::nn_single,         Regime::self_learning,
                                         Regime::multitask,         Regime::multitask_self_learning};

std::string_view to_string(Regime r);
std::string_view display_name(Regime r);
Regime regime_from_string(std::string_view s);
bool is_multitask(Regime r);

struct ExperimentConfig {
  std::string dataset = "dataset";
  std::string split_dir;
  std::string embeddings;
  std::vector<data::RelationTask> tasks;
  std::vector<Regime> regimes;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> hidden = mtl::kDefaultHidden;
  mtl::TrainConfig train;               // seed field is ignored; cells derive their own
  selflearn::SelfLearnConfig self_learn;
  std::size_t retrain_epochs = 20;      // epoch budget per warm-start retrain
  eval::LogRegConfig logreg;
  bool parallel_cells = true;
  std::string config_hash;

  /// Reads every known key; unknown keys are a ConfigError.
  /// RELMTL_SPLIT_DIR / RELMTL_EMBEDDINGS override the path keys.
  static ExperimentConfig from(const KeyValueConfig& kv);

  /// Regime/task compatibility and file existence. Throws ConfigError.
  void validate() const;
};

/// Comma-separated list parsing helpers.
std::vector<std::string> split_list(const std::string& s);
std::vector<data::RelationTask> parse_tasks(const std::string& s);

}  // namespace relmtl::cli

#endif  // RELMTL_CONFIG_HPP_
