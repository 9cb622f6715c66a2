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

#ifndef RELMTL_EXPERIMENT_HPP_
#define RELMTL_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relmtl/config.hpp"
#include "relmtl/embeddings.hpp"
#include "relmtl/multitask.hpp"
#include "relmtl/selflearn.hpp"
#include "relmtl/split_io.hpp"

namespace relmtl::cli {

/// One (task, regime, seed) evaluation on the held-out test set.
struct ResultRecord {
  std::string dataset;
  std::string task;
  std::string regime;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::size_t test_size = 0;
  std::string config_hash;
  std::optional<std::size_t> self_learning_iterations;
  std::optional<double> pseudo_label_noise;  // share of wrong pseudo-labels kept by the best model

  std::string to_json() const;
  static ResultRecord from_json(std::string_view line);
  bool operator==(const ResultRecord&) const = default;
};

/// Mean and sample standard deviation across seeds.
struct AggregateRecord {
  std::string dataset;
  std::string task;
  std::string regime;
  std::size_t seeds = 0;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  double macro_f1_mean = 0.0;
  double macro_f1_std = 0.0;
  std::string config_hash;

  std::string to_json() const;
};

std::vector<AggregateRecord> aggregate(std::span<const ResultRecord> results);

/// Ordered record of which data parts were read and when training happened.
class AuditLog {
 public:
  void record(std::string event) { events_.push_back(std::move(event)); }
  const std::vector<std::string>& events() const noexcept { return events_; }

  /// True if nothing but evaluation follows the test-set read.
  bool test_read_after_training() const;

 private:
  std::vector<std::string> events_;
};

/// Encoded data of one relation-vs-random task.
struct PreparedTask {
  data::RelationTask task;
  Matrix labeled_x;
  std::vector<std::size_t> labeled_y;
  Matrix validation_x;
  std::vector<std::size_t> validation_y;
  Matrix unlabeled_x;
  std::vector<std::size_t> unlabeled_gold;  // audit only
};

/// Builds per-task matrices from the train-side parts. Unlabeled pairs are
/// routed to a task by their sealed gold label, since semi-supervision is
/// simulated by holding labels back.
std::vector<PreparedTask> prepare_tasks(std::span<const data::RelationTask> tasks,
                                        std::span<const data::WordPair> labeled,
                                        std::span<const data::WordPair> validation,
                                        const data::UnlabeledPool& unlabeled, const data::EmbeddingTable& table);

/// Reads the train-side parts of a split directory and the embeddings, then
/// prepares the tasks. The test part is not read.
std::vector<PreparedTask> load_prepared_tasks(const std::string& split_dir, const std::string& embeddings,
                                              std::span<const data::RelationTask> tasks);

struct NeuralOptions {
  std::vector<std::size_t> hidden = mtl::kDefaultHidden;
  mtl::TrainConfig train;
  selflearn::SelfLearnConfig self_learn;
  std::size_t retrain_epochs = 20;
};

/// Seed streams of a neural run over `tasks` (not of the regime, so a
/// one-task multitask run and the NN baseline coincide).
std::uint64_t init_seed(std::uint64_t seed, std::span<const PreparedTask> tasks);
std::uint64_t batch_seed(std::uint64_t seed, std::span<const PreparedTask> tasks);

std::vector<mtl::TaskData> task_data(std::span<const PreparedTask> tasks);

/// Shared-trunk network over all given tasks (one task = NN baseline).
mtl::TrainResult train_network(std::span<const PreparedTask> tasks, const NeuralOptions& options,
                               std::uint64_t seed);

struct SelfTrainOutcome {
  mtl::MultiTaskModel model;
  selflearn::SelfLearnState state;
  double pseudo_label_noise = 0.0;
};

/// Self-learning around train_network: U^i of each task is pseudo-labeled by
/// head i; V_t is the mean validation accuracy over tasks.
SelfTrainOutcome self_train_network(std::span<const PreparedTask> tasks, const NeuralOptions& options,
                                    std::uint64_t seed);

struct RunOutput {
  std::vector<ResultRecord> results;
  std::vector<AggregateRecord> aggregates;
  std::vector<std::string> timings;  // JSON lines with wall-clock per cell
  AuditLog audit;
};

/// Trains every (regime, seed) cell on the split's train-side parts, then
/// reads the test part and evaluates each task. Throws ConfigError before
/// touching data if the config is invalid.
RunOutput run_experiment(const ExperimentConfig& config);

/// Result lines followed by aggregate lines. Deterministic for a given input.
void write_results(std::ostream& out, const RunOutput& run);

}  // namespace relmtl::cli

#endif  // RELMTL_EXPERIMENT_HPP_
