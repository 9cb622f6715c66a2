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

#include "relmtl/metrics.hpp"

#include <stdexcept>
#include <string>

namespace relmtl::eval {

ConfusionTally::ConfusionTally(std::span<const std::size_t> predictions, std::span<const std::size_t> golds,
                               std::size_t classes)
    : tp_(classes, 0), fp_(classes, 0), fn_(classes, 0), total_(golds.size()) {
  if (classes == 0) throw std::invalid_argument("ConfusionTally: empty class alphabet");
  if (predictions.size() != golds.size()) {
    throw std::invalid_argument("ConfusionTally: " + std::to_string(predictions.size()) + " predictions for " +
                                std::to_string(golds.size()) + " gold labels");
  }
  for (std::size_t k = 0; k < golds.size(); ++k) {
    const std::size_t p = predictions[k];
    const std::size_t g = golds[k];
    if (p >= classes || g >= classes) throw std::invalid_argument("ConfusionTally: label outside the alphabet");
    if (p == g) {
      ++tp_[g];
    } else {
      ++fp_[p];
      ++fn_[g];
    }
  }
}

double ConfusionTally::precision(std::size_t c) const {
  const std::size_t denom = tp_.at(c) + fp_.at(c);
  return denom == 0 ? 0.0 : static_cast<double>(tp_[c]) / static_cast<double>(denom);
}

double ConfusionTally::recall(std::size_t c) const {
  const std::size_t denom = tp_.at(c) + fn_.at(c);
  return denom == 0 ? 0.0 : static_cast<double>(tp_[c]) / static_cast<double>(denom);
}

double ConfusionTally::f1(std::size_t c) const {
  const double p = precision(c);
  const double r = recall(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> golds) {
  if (golds.empty() || predictions.size() != golds.size()) {
    throw std::invalid_argument("accuracy: inputs must be nonempty and of equal length");
  }
  std::size_t correct = 0;
  for (std::size_t k = 0; k < golds.size(); ++k) correct += predictions[k] == golds[k] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(golds.size());
}

double macro_f1(std::span<const std::size_t> predictions, std::span<const std::size_t> golds, std::size_t classes) {
  const ConfusionTally tally(predictions, golds, classes);
  double sum = 0.0;
  for (std::size_t c = 0; c < classes; ++c) sum += tally.f1(c);
  return sum / static_cast<double>(classes);
}

MajorityClassifier::MajorityClassifier(std::span<const std::size_t> train_labels, std::size_t classes) {
  if (train_labels.empty()) throw std::invalid_argument("majority_baseline: no training labels");
  std::vector<std::size_t> counts(classes, 0);
  for (std::size_t y : train_labels) counts.at(y) += 1;
  for (std::size_t c = 1; c < classes; ++c) {
    if (counts[c] > counts[label_]) label_ = c;
  }
}

}  // namespace relmtl::eval
