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

#ifndef RELMTL_METRICS_HPP_
#define RELMTL_METRICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace relmtl::eval {

/// Per-class TP/FP/FN counts over a label alphabet {0, ..., classes-1}.
class ConfusionTally {
 public:
  ConfusionTally(std::span<const std::size_t> predictions, std::span<const std::size_t> golds,
                 std::size_t classes);

  std::size_t classes() const noexcept { return tp_.size(); }
  std::size_t total() const noexcept { return total_; }
  std::size_t true_positives(std::size_t c) const { return tp_.at(c); }
  std::size_t false_positives(std::size_t c) const { return fp_.at(c); }
  std::size_t false_negatives(std::size_t c) const { return fn_.at(c); }

  double precision(std::size_t c) const;
  double recall(std::size_t c) const;
  /// 2PR/(P+R), or 0 when P+R = 0.
  double f1(std::size_t c) const;

 private:
  std::vector<std::size_t> tp_;
  std::vector<std::size_t> fp_;
  std::vector<std::size_t> fn_;
  std::size_t total_ = 0;
};

/// Fraction of positions where prediction equals gold.
/// Throws std::invalid_argument on empty or unequal-length input.
double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> golds);

/// Unweighted mean of per-class F1 over the whole alphabet; classes that
/// never occur in either sequence contribute 0.
double macro_f1(std::span<const std::size_t> predictions, std::span<const std::size_t> golds, std::size_t classes);

/// Always predicts the most frequent training label (ties: lowest index).
class MajorityClassifier {
 public:
  MajorityClassifier(std::span<const std::size_t> train_labels, std::size_t classes);

  std::size_t label() const noexcept { return label_; }
  std::vector<std::size_t> predict(std::size_t n) const { return std::vector<std::size_t>(n, label_); }

 private:
  std::size_t label_ = 0;
};

inline MajorityClassifier majority_baseline(std::span<const std::size_t> train_labels, std::size_t classes) {
  return MajorityClassifier(train_labels, classes);
}

}  // namespace relmtl::eval

#endif  // RELMTL_METRICS_HPP_
