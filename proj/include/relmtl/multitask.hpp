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

#ifndef RELMTL_MULTITASK_HPP_
#define RELMTL_MULTITASK_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relmtl/matrix.hpp"
#include "relmtl/nn.hpp"

namespace relmtl::mtl {

/// Hard parameter sharing: a sigmoid trunk shared by every task and one
/// softmax head per task. With a single head this is the plain one-task
/// network used as the NN baseline.
struct MultiTaskModel {
  std::size_t input_dim = 0;
  std::vector<nn::DenseLayer> trunk;
  std::vector<nn::DenseLayer> heads;
  std::vector<nn::LayerOptimizer> trunk_optimizer;
  std::vector<nn::LayerOptimizer> head_optimizer;

  std::size_t task_count() const noexcept { return heads.size(); }
  std::size_t parameter_count() const noexcept;
  std::size_t class_count(std::size_t task) const { return heads.at(task).out_dim(); }

  /// trunk layers followed by head `task`.
  std::vector<const nn::DenseLayer*> chain(std::size_t task) const;

  /// Sets learning rate / rho / epsilon on every optimizer state.
  void set_optimizer(const nn::RmsPropConfig& cfg);

  /// Clears the RMSprop caches (used when retraining from a fresh optimizer).
  void reset_optimizer();
};

inline const std::vector<std::size_t> kDefaultHidden = {50, 50};

/// Deterministic in `seed`: trunk layers are initialized first, then heads,
/// all from one generator.
MultiTaskModel build_model(std::size_t input_dim, std::span<const std::size_t> hidden_widths,
                           std::span<const std::size_t> task_class_counts, std::uint64_t seed,
                           const nn::RmsPropConfig& optimizer = {});

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 200;
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  double learning_rate = 0.001;
  double rho = 0.9;
  double epsilon = 1e-8;

  void validate() const;
};

/// Labeled set L^i and validation set V^i for one task.
struct TaskData {
  Matrix train_x;
  std::vector<std::size_t> train_y;
  Matrix val_x;
  std::vector<std::size_t> val_y;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  std::vector<double> val_accuracy;
  std::vector<double> val_loss;
  double mean_accuracy = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // index into `epochs`
  std::size_t optimizer_steps = 0;
  bool stopped_early = false;

  bool operator==(const TrainHistory&) const;
};

struct TrainResult {
  MultiTaskModel model;  // snapshot from the best epoch
  TrainHistory history;
};

/// Batches drawn per task in one epoch: ceil(max_i |L^i| / batch_size).
std::size_t rounds_per_epoch(std::span<const TaskData> tasks, std::size_t batch_size);

/// One RMSprop step on the trunk and head `task` for the batch (x, y).
void train_step(MultiTaskModel& model, std::size_t task, const Matrix& x, std::span<const std::size_t> y);

/// Multi-task training loop.
///
/// Each epoch runs `rounds_per_epoch` rounds; a round visits tasks in order
/// and, for each, draws one batch uniformly with replacement from L^i and
/// applies one RMSprop step to the trunk and head i (other heads untouched).
/// After every epoch the validation accuracy and loss of each task is
/// recorded. The returned model is the snapshot with the best mean
/// validation accuracy; training stops once `patience` consecutive epochs
/// fail to improve on it.
TrainResult train_multitask(MultiTaskModel model, std::span<const TaskData> tasks, const TrainConfig& config);

/// Softmax output of head `task` for each row of `features`.
Matrix predict(const MultiTaskModel& model, std::size_t task, const Matrix& features);

std::vector<std::size_t> predict_labels(const MultiTaskModel& model, std::size_t task, const Matrix& features);

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;
};

Evaluation evaluate(const MultiTaskModel& model, std::size_t task, const Matrix& features,
                    std::span<const std::size_t> labels);

}  // namespace relmtl::mtl

#endif  // RELMTL_MULTITASK_HPP_
