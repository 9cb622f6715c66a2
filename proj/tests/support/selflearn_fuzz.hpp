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

#ifndef RELMTL_TESTS_SELFLEARN_FUZZ_HPP_
#define RELMTL_TESTS_SELFLEARN_FUZZ_HPP_

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "relmtl/rng.hpp"
#include "relmtl/selflearn.hpp"

namespace relmtl::testing {

// Stand-in classifier: `stamp` seeds its confidences, `score` is its
// validation result.
struct MockClassifier {
  std::uint64_t stamp = 0;
  double score = 0.0;
};

// The k-th trained model validates at scores[k] (last value repeats).
// Confidences are pseudo-random per (model, task, id).
inline selflearn::Trainer<MockClassifier> mock_trainer(std::vector<double> scores,
                                                       std::vector<std::size_t> class_counts,
                                                       std::uint64_t seed) {
  auto calls = std::make_shared<std::size_t>(0);
  selflearn::Trainer<MockClassifier> trainer;
  trainer.train = [scores, seed, calls](std::span<const selflearn::TaskPool>, const MockClassifier*) {
    const std::size_t k = (*calls)++;
    return MockClassifier{mix_seed(seed + k), scores[std::min(k, scores.size() - 1)]};
  };
  trainer.score = [class_counts](const MockClassifier& c, std::size_t task, std::span<const std::size_t> ids) {
    const std::size_t classes = class_counts.at(task);
    Matrix probs(ids.size(), classes);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      Rng rng(mix_seed(c.stamp ^ (ids[r] * 0x9e3779b97f4a7c15ULL) ^ (task + 1)));
      double total = 0.0;
      for (std::size_t j = 0; j < classes; ++j) total += probs(r, j) = rng.uniform01() + 1e-3;
      for (std::size_t j = 0; j < classes; ++j) probs(r, j) /= total;
    }
    return probs;
  };
  trainer.validate = [](const MockClassifier& c) { return c.score; };
  return trainer;
}

struct FuzzOutcome {
  std::vector<std::string> violations;
  std::size_t iterations = 0;
};

// One randomized self-learning run, checked for set-size conservation,
// per-iteration stratification (+-1 per class), the ceil(|U0|/N) iteration
// bound and a returned score no lower than V0.
inline FuzzOutcome fuzz_self_learning(std::uint64_t seed) {
  Rng rng(seed);
  FuzzOutcome out;
  const std::size_t tasks = 1 + rng.index(3);
  std::vector<selflearn::TaskPool> pools(tasks);
  std::vector<std::size_t> classes(tasks);
  std::size_t next_id = 0;
  for (std::size_t i = 0; i < tasks; ++i) {
    classes[i] = 2 + rng.index(3);
    pools[i].num_classes = classes[i];
    const std::size_t n_labeled = 1 + rng.index(40);
    for (std::size_t k = 0; k < n_labeled; ++k) {
      // Skewed label distribution.
      const std::size_t label = std::min(rng.index(classes[i]), rng.index(classes[i]));
      pools[i].labeled.push_back({next_id++, label, false});
    }
    const std::size_t n_unlabeled = rng.index(300);
    for (std::size_t k = 0; k < n_unlabeled; ++k) pools[i].unlabeled.push_back(next_id++);
  }

  selflearn::SelfLearnConfig cfg;
  if (rng.index(4) != 0) cfg.n_per_iteration = 1 + rng.index(60);
  cfg.max_iterations = rng.index(5) == 0 ? rng.index(4) : 1000;
  cfg.retrain_mode = rng.index(2) == 0 ? selflearn::RetrainMode::warm_start : selflearn::RetrainMode::from_scratch;

  std::vector<double> scores{0.5};
  for (std::size_t k = 0; k < 400; ++k) {
    scores.push_back(rng.index(12) == 0 ? rng.uniform(0.0, 0.5) : rng.uniform(0.5, 1.0));
  }

  std::vector<std::vector<double>> base;
  std::size_t bound = 0;
  std::size_t total = 0;
  for (const auto& p : pools) {
    base.push_back(selflearn::class_distribution(p));
    const std::size_t n = cfg.n_per_iteration.value_or(selflearn::default_batch(p.unlabeled.size()));
    bound = std::max(bound, (p.unlabeled.size() + n - 1) / n);
    total += p.labeled.size() + p.unlabeled.size();
  }
  const std::vector<selflearn::TaskPool> initial = pools;

  const auto trainer = mock_trainer(scores, classes, seed);
  const auto result = selflearn::self_learn(trainer, std::move(pools), cfg);
  const auto& st = result.state;
  out.iterations = st.t;
  const auto fail = [&](const std::string& what) {
    out.violations.push_back("seed " + std::to_string(seed) + ": " + what);
  };

  for (const auto& rec : st.history) {
    if (rec.labeled + rec.unlabeled != total) fail("|L|+|U| changed at t=" + std::to_string(rec.t));
  }
  if (st.t > bound) fail("ran " + std::to_string(st.t) + " iterations, bound " + std::to_string(bound));
  if (trainer.validate(result.best) < st.initial_score()) fail("returned score below V0");

  for (std::size_t i = 0; i < tasks; ++i) {
    const auto& labeled = st.pools[i].labeled;
    for (std::size_t k = 0; k < initial[i].labeled.size(); ++k) {
      if (labeled[k] != initial[i].labeled[k]) fail("original labeled examples changed");
    }
    for (std::size_t t = 1; t < st.history.size(); ++t) {
      const std::size_t from = st.history[t - 1].labeled_per_task[i];
      const std::size_t to = st.history[t].labeled_per_task[i];
      std::vector<double> counts(classes[i], 0.0);
      for (std::size_t k = from; k < to; ++k) {
        if (!labeled[k].pseudo) fail("non-pseudo example appended");
        counts[labeled[k].label] += 1.0;
      }
      for (std::size_t c = 0; c < classes[i]; ++c) {
        const double target = base[i][c] * static_cast<double>(to - from);
        if (std::abs(counts[c] - target) > 1.0) {
          fail("task " + std::to_string(i) + " class " + std::to_string(c) + " got " +
               std::to_string(counts[c]) + ", target " + std::to_string(target));
        }
      }
    }
  }
  return out;
}

}  // namespace relmtl::testing

#endif  // RELMTL_TESTS_SELFLEARN_FUZZ_HPP_
