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

#ifndef RELMTL_SELFLEARN_HPP_
#define RELMTL_SELFLEARN_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relmtl/matrix.hpp"

// Self-learning: train on the labeled set, move the most confident
// unlabeled examples (pseudo-labeled, stratified by the initial class
// distribution) into it, retrain, and stop when the unlabeled pool is empty
// or the validation score falls below the initial one.
//
// The loop runs over one or more tasks at once. Each task owns a labeled set
// and an unlabeled pool of example ids; what an id refers to is up to the
// trainer callbacks. With several tasks one classifier (e.g. a multi-task
// network) is retrained on all labeled sets and scored per task.
namespace relmtl::selflearn {

struct Selection {
  std::size_t index = 0;  // row of the probability matrix
  std::size_t label = 0;  // pseudo-label

  bool operator==(const Selection&) const = default;
};

/// Largest-remainder apportionment of `total` over `proportions`.
/// Remainder ties go to the lower class index. Sums to `total`.
std::vector<std::size_t> largest_remainder_quotas(std::span<const double> proportions, std::size_t total);

/// Picks min(n, rows) examples so the pseudo-label counts follow
/// `base_distribution` (largest-remainder quotas).
///
/// Classes are served in descending quota order (ties by class index); a
/// class takes its highest-probability examples that no earlier class took.
/// Every untaken example is a candidate for every class, so a class can only
/// run short once the whole pool is used up.
std::vector<Selection> stratified_select(const Matrix& class_probs, std::span<const double> base_distribution,
                                         std::int64_t n);

enum class RetrainMode { warm_start, from_scratch };

std::string_view to_string(RetrainMode m);
RetrainMode retrain_mode_from_string(std::string_view s);

struct SelfLearnConfig {
  std::optional<std::size_t> n_per_iteration;  // unset: default_batch(|U0|) per task
  std::size_t max_iterations = 1000;
  RetrainMode retrain_mode = RetrainMode::warm_start;
  std::uint64_t seed = 0;
};

/// max(32, ceil(0.05 * unlabeled)).
std::size_t default_batch(std::size_t unlabeled);

struct LabeledExample {
  std::size_t id = 0;
  std::size_t label = 0;
  bool pseudo = false;

  bool operator==(const LabeledExample&) const = default;
};

struct TaskPool {
  std::vector<LabeledExample> labeled;
  std::vector<std::size_t> unlabeled;
  std::size_t num_classes = 2;
};

/// Class proportions of the labeled set.
std::vector<double> class_distribution(const TaskPool& pool);

enum class StopReason { none, unlabeled_exhausted, validation_degraded, max_iterations };

std::string_view to_string(StopReason r);
StopReason stop_reason_from_string(std::string_view s);

/// One line of the self-learning log.
struct IterationRecord {
  std::size_t t = 0;
  std::size_t labeled = 0;    // |L_t| summed over tasks
  std::size_t unlabeled = 0;  // |U_t| summed over tasks
  double validation = 0.0;    // V_t
  std::vector<std::size_t> labeled_per_task;
  std::vector<std::size_t> unlabeled_per_task;
  StopReason stopped_reason = StopReason::none;  // set on the final record only

  bool operator==(const IterationRecord&) const = default;
};

struct SelfLearnState {
  std::vector<TaskPool> pools;  // L_t and U_t
  std::size_t t = 0;
  std::vector<IterationRecord> history;
  std::size_t best_iteration = 0;
  StopReason stop_reason = StopReason::none;

  double initial_score() const { return history.front().validation; }
};

/// Callbacks that connect the loop to a concrete classifier.
template <typename Classifier>
struct Trainer {
  // Fit on the labeled sets. `previous` is the current classifier when
  // warm-starting and null otherwise.
  std::function<Classifier(std::span<const TaskPool> pools, const Classifier* previous)> train;
  // Class-probability rows for the given unlabeled ids of one task.
  std::function<Matrix(const Classifier& c, std::size_t task, std::span<const std::size_t> ids)> score;
  // Validation performance (higher is better).
  std::function<double(const Classifier& c)> validate;
};

template <typename Classifier>
struct SelfLearnResult {
  Classifier best;
  SelfLearnState state;
};

namespace detail {

void check_pools(std::span<const TaskPool> pools);
std::vector<std::size_t> batch_sizes(std::span<const TaskPool> pools, const SelfLearnConfig& config);
// Moves the selected ids of one task from U to L (append-only).
void move_selected(TaskPool& pool, std::span<const Selection> picks);
IterationRecord make_record(std::size_t t, double score, std::span<const TaskPool> pools);

}  // namespace detail

template <typename Classifier>
SelfLearnResult<Classifier> self_learn(const Trainer<Classifier>& trainer, std::vector<TaskPool> pools,
                                       const SelfLearnConfig& config) {
  detail::check_pools(pools);
  const auto n_per_task = detail::batch_sizes(pools, config);
  std::vector<std::vector<double>> base;
  for (const auto& p : pools) base.push_back(class_distribution(p));

  Classifier current = trainer.train(pools, nullptr);
  const double v0 = trainer.validate(current);
  SelfLearnResult<Classifier> result{current, {}};
  auto& state = result.state;
  state.history.push_back(detail::make_record(0, v0, pools));
  double best_score = v0;
  double vt = v0;

  while (true) {
    std::size_t remaining = 0;
    for (const auto& p : pools) remaining += p.unlabeled.size();
    if (remaining == 0) {
      state.stop_reason = StopReason::unlabeled_exhausted;
      break;
    }
    if (vt < v0) {
      state.stop_reason = StopReason::validation_degraded;
      break;
    }
    if (state.t >= config.max_iterations) {
      state.stop_reason = StopReason::max_iterations;
      break;
    }

    for (std::size_t task = 0; task < pools.size(); ++task) {
      auto& pool = pools[task];
      if (pool.unlabeled.empty()) continue;
      const Matrix probs = trainer.score(current, task, pool.unlabeled);
      if (probs.rows() != pool.unlabeled.size() || probs.cols() != pool.num_classes) {
        throw std::runtime_error("self_learn: scorer returned a " + std::to_string(probs.rows()) + "x" +
                                 std::to_string(probs.cols()) + " matrix for task " + std::to_string(task));
      }
      const auto picks =
          stratified_select(probs, base[task], static_cast<std::int64_t>(n_per_task[task]));
      detail::move_selected(pool, picks);
    }
    ++state.t;
    current = trainer.train(pools, config.retrain_mode == RetrainMode::warm_start ? &current : nullptr);
    vt = trainer.validate(current);
    state.history.push_back(detail::make_record(state.t, vt, pools));
    if (vt > best_score) {
      best_score = vt;
      result.best = current;
      state.best_iteration = state.t;
    }
  }
  state.history.back().stopped_reason = state.stop_reason;
  state.pools = std::move(pools);
  return result;
}

/// Single-task convenience overload.
template <typename Classifier>
SelfLearnResult<Classifier> self_learn(const Trainer<Classifier>& trainer, TaskPool pool,
                                       const SelfLearnConfig& config) {
  std::vector<TaskPool> pools;
  pools.push_back(std::move(pool));
  return self_learn(trainer, std::move(pools), config);
}

// Line-delimited JSON log, one object per iteration:
//   {"t":1,"labeled":120,"unlabeled":80,"validation":0.8,
//    "labeled_per_task":[120],"unlabeled_per_task":[80],"stopped_reason":null}
void write_log(std::ostream& out, std::span<const IterationRecord> history);
std::vector<IterationRecord> read_log(std::istream& in);

}  // namespace relmtl::selflearn

#endif  // RELMTL_SELFLEARN_HPP_
