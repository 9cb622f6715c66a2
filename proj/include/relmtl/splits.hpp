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

#ifndef RELMTL_SPLITS_HPP_
#define RELMTL_SPLITS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relmtl/pairs.hpp"

namespace relmtl::data {

struct LexicalSplit {
  std::vector<WordPair> train;
  std::vector<WordPair> test;
  std::size_t discarded = 0;  // pairs with one word on each side
};

/// Lexical split: the sorted vocabulary is shuffled with `seed` and
/// round(fraction * |V|) words (at least one, at most |V|-1) form the test
/// lot. A pair goes to test if both words are in the test lot, to train if
/// neither is, and is discarded otherwise. Throws EmptySplitError if either
/// side ends up empty.
LexicalSplit lexical_split(std::span<const WordPair> pairs, double test_vocab_fraction, std::uint64_t seed);

/// Unlabeled pool. The gold labels are kept for auditing pseudo-labels in
/// simulated semi-supervision and must not be fed to a learner.
class UnlabeledPool {
 public:
  UnlabeledPool() = default;
  explicit UnlabeledPool(std::vector<WordPair> sealed) : pairs_(std::move(sealed)) {}

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  const std::string& x(std::size_t i) const { return pairs_.at(i).x; }
  const std::string& y(std::size_t i) const { return pairs_.at(i).y; }

  /// The hidden gold labels. Audit use only.
  const std::vector<WordPair>& audit() const noexcept { return pairs_; }

 private:
  std::vector<WordPair> pairs_;
};

struct SplitBundle {
  std::vector<WordPair> train;       // L
  std::vector<WordPair> validation;  // V
  UnlabeledPool unlabeled;           // U
  std::vector<WordPair> test;
};

struct PartitionCounts {
  std::size_t unlabeled = 0;
  std::size_t validation = 0;
  std::size_t labeled = 0;
};

/// u = round(uf * n), v = round(vf * (n - u)), l = n - u - v.
PartitionCounts partition_counts(std::size_t n, double unlabeled_fraction, double validation_fraction);

/// Splits the train side into U / V / L, per relation label when
/// `stratified` (classes in enum order, each shuffled with `seed`). Part
/// sizes follow partition_counts over all pairs; each class gets its
/// largest-remainder share of them.
/// Throws std::invalid_argument listing any class with fewer than 3 pairs
/// when stratified, or on fractions outside (0, 1).
SplitBundle partition_train(std::span<const WordPair> train_side, double unlabeled_fraction,
                            double validation_fraction, std::uint64_t seed, bool stratified = true);

}  // namespace relmtl::data

#endif  // RELMTL_SPLITS_HPP_
