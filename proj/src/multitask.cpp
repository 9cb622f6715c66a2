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

#include "relmtl/multitask.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "relmtl/rng.hpp"

namespace relmtl::mtl {

std::size_t MultiTaskModel::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : trunk) n += l.parameter_count();
  for (const auto& l : heads) n += l.parameter_count();
  return n;
}

std::vector<const nn::DenseLayer*> MultiTaskModel::chain(std::size_t task) const {
  if (task >= heads.size()) {
    throw std::invalid_argument("task index " + std::to_string(task) + " out of range (model has " +
                                std::to_string(heads.size()) + " heads)");
  }
  std::vector<const nn::DenseLayer*> layers;
  layers.reserve(trunk.size() + 1);
  for (const auto& l : trunk) layers.push_back(&l);
  layers.push_back(&heads[task]);
  return layers;
}

void MultiTaskModel::set_optimizer(const nn::RmsPropConfig& cfg) {
  cfg.validate();
  for (auto* group : {&trunk_optimizer, &head_optimizer}) {
    for (auto& opt : *group) {
      opt.weights.config = cfg;
      opt.biases.config = cfg;
    }
  }
}

void MultiTaskModel::reset_optimizer() {
  for (auto* group : {&trunk_optimizer, &head_optimizer}) {
    for (auto& opt : *group) {
      std::fill(opt.weights.cache.begin(), opt.weights.cache.end(), 0.0);
      std::fill(opt.biases.cache.begin(), opt.biases.cache.end(), 0.0);
    }
  }
}

MultiTaskModel build_model(std::size_t input_dim, std::span<const std::size_t> hidden_widths,
                           std::span<const std::size_t> task_class_counts, std::uint64_t seed,
                           const nn::RmsPropConfig& optimizer) {
  if (input_dim == 0) {
    throw std::invalid_argument("build_model: input_dim must be positive");
  }
  if (task_class_counts.empty()) {
    throw std::invalid_argument("build_model: at least one task is required");
  }
  optimizer.validate();
  Rng rng(seed);
  MultiTaskModel model;
  model.input_dim = input_dim;
  std::size_t width = input_dim;
  for (std::size_t h : hidden_widths) {
    model.trunk.push_back(nn::glorot_init(width, h, nn::Activation::sigmoid, rng));
    width = h;
  }
  for (std::size_t classes : task_class_counts) {
    if (classes < 2) {
      throw std::invalid_argument("build_model: every task needs at least two classes");
    }
    model.heads.push_back(nn::glorot_init(width, classes, nn::Activation::softmax, rng));
  }
  for (const auto& l : model.trunk) model.trunk_optimizer.emplace_back(optimizer, l);
  for (const auto& l : model.heads) model.head_optimizer.emplace_back(optimizer, l);
  return model;
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (epochs == 0) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  nn::RmsPropConfig{learning_rate, rho, epsilon}.validate();
}

bool TrainHistory::operator==(const TrainHistory& other) const {
  if (best_epoch != other.best_epoch || optimizer_steps != other.optimizer_steps ||
      stopped_early != other.stopped_early || epochs.size() != other.epochs.size()) {
    return false;
  }
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const auto& a = epochs[e];
    const auto& b = other.epochs[e];
    if (a.epoch != b.epoch || !bitwise_equal(a.val_accuracy, b.val_accuracy) ||
        !bitwise_equal(a.val_loss, b.val_loss) || !bitwise_equal(std::span(&a.mean_accuracy, 1),
                                                                 std::span(&b.mean_accuracy, 1))) {
      return false;
    }
  }
  return true;
}

std::size_t rounds_per_epoch(std::span<const TaskData> tasks, std::size_t batch_size) {
  std::size_t largest = 0;
  for (const auto& t : tasks) largest = std::max(largest, t.train_y.size());
  return (largest + batch_size - 1) / batch_size;
}

namespace {

void check_tasks(const MultiTaskModel& model, std::span<const TaskData> tasks) {
  if (tasks.size() != model.task_count()) {
    throw std::invalid_argument("train_multitask: model has " + std::to_string(model.task_count()) +
                                " heads but " + std::to_string(tasks.size()) + " task datasets were given");
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const std::string which = "task " + std::to_string(i);
    if (t.train_y.empty() || t.val_y.empty()) {
      throw std::invalid_argument(which + ": labeled and validation sets must be nonempty");
    }
    if (t.train_x.rows() != t.train_y.size() || t.val_x.rows() != t.val_y.size()) {
      throw std::invalid_argument(which + ": feature/label count mismatch");
    }
    if (t.train_x.cols() != model.input_dim || t.val_x.cols() != model.input_dim) {
      throw std::invalid_argument(which + ": feature dimension " + std::to_string(t.train_x.cols()) +
                                  " does not match model input " + std::to_string(model.input_dim));
    }
    const std::size_t k = model.class_count(i);
    auto out_of_range = [k](std::size_t y) { return y >= k; };
    if (std::any_of(t.train_y.begin(), t.train_y.end(), out_of_range) ||
        std::any_of(t.val_y.begin(), t.val_y.end(), out_of_range)) {
      throw std::invalid_argument(which + ": label outside the head's classes");
    }
  }
}


}  // namespace

void train_step(MultiTaskModel& model, std::size_t task, const Matrix& x, std::span<const std::size_t> y) {
  const auto chain = model.chain(task);
  const auto trace = nn::forward(nn::LayerChain(chain), x);
  const auto grads = nn::backward(nn::LayerChain(chain), trace, y);
  for (std::size_t l = 0; l < model.trunk.size(); ++l) {
    nn::rmsprop_step(model.trunk[l], grads[l], model.trunk_optimizer[l]);
  }
  nn::rmsprop_step(model.heads[task], grads.back(), model.head_optimizer[task]);
}

TrainResult train_multitask(MultiTaskModel model, std::span<const TaskData> tasks, const TrainConfig& config) {
  config.validate();
  check_tasks(model, tasks);
  model.set_optimizer({config.learning_rate, config.rho, config.epsilon});

  Rng rng(config.seed);
  const std::size_t rounds = rounds_per_epoch(tasks, config.batch_size);
  TrainResult result{model, {}};
  double best = -1.0;
  std::size_t stale = 0;
  std::vector<std::size_t> batch_idx(config.batch_size);
  std::vector<std::size_t> batch_y(config.batch_size);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t r = 0; r < rounds; ++r) {
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        for (std::size_t k = 0; k < config.batch_size; ++k) {
          batch_idx[k] = rng.index(t.train_y.size());
          batch_y[k] = t.train_y[batch_idx[k]];
        }
        train_step(model, i, t.train_x.gather_rows(batch_idx), batch_y);
        ++result.history.optimizer_steps;
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const auto ev = evaluate(model, i, tasks[i].val_x, tasks[i].val_y);
      rec.val_accuracy.push_back(ev.accuracy);
      rec.val_loss.push_back(ev.loss);
      rec.mean_accuracy += ev.accuracy;
    }
    rec.mean_accuracy /= static_cast<double>(tasks.size());
    result.history.epochs.push_back(std::move(rec));

    if (result.history.epochs.back().mean_accuracy > best) {
      best = result.history.epochs.back().mean_accuracy;
      result.history.best_epoch = result.history.epochs.size() - 1;
      result.model = model;
      stale = 0;
    } else if (++stale >= config.patience) {
      result.history.stopped_early = epoch < config.epochs;
      break;
    }
  }
  return result;
}

Matrix predict(const MultiTaskModel& model, std::size_t task, const Matrix& features) {
  const auto chain = model.chain(task);
  if (features.rows() == 0) return Matrix(0, model.class_count(task));
  auto trace = nn::forward(nn::LayerChain(chain), features);
  return std::move(trace.activations.back());
}

std::vector<std::size_t> predict_labels(const MultiTaskModel& model, std::size_t task, const Matrix& features) {
  return nn::argmax_rows(predict(model, task, features));
}

Evaluation evaluate(const MultiTaskModel& model, std::size_t task, const Matrix& features,
                    std::span<const std::size_t> labels) {
  if (features.rows() != labels.size() || labels.empty()) {
    throw std::invalid_argument("evaluate: feature/label count mismatch or empty set");
  }
  const Matrix probs = predict(model, task, features);
  const auto pred = nn::argmax_rows(probs);
  std::size_t correct = 0;
  double loss = 0.0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    correct += pred[r] == labels[r] ? 1 : 0;
    loss += nn::cross_entropy(probs.row(r), labels[r]);
  }
  const auto n = static_cast<double>(labels.size());
  return {static_cast<double>(correct) / n, loss / n};
}

}  // namespace relmtl::mtl
