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

#include "relmtl/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "relmtl/error.hpp"
#include "relmtl/rng.hpp"

namespace relmtl::data {
namespace {

std::size_t round_count(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

void check_fraction(double f, const char* what) {
  if (!(f > 0.0 && f < 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

LexicalSplit lexical_split(std::span<const WordPair> pairs, double test_vocab_fraction, std::uint64_t seed) {
  check_fraction(test_vocab_fraction, "test_vocab_fraction");
  auto vocab = vocabulary(pairs);
  Rng rng(seed);
  rng.shuffle(std::span(vocab));

  std::size_t n_test = 0;
  if (vocab.size() >= 2) {
    n_test = std::clamp<std::size_t>(round_count(test_vocab_fraction * static_cast<double>(vocab.size())), 1,
                                     vocab.size() - 1);
  }
  const std::unordered_set<std::string> test_lot(vocab.begin(), vocab.begin() + static_cast<std::ptrdiff_t>(n_test));

  LexicalSplit split;
  for (const auto& p : pairs) {
    const bool x_test = test_lot.count(p.x) != 0;
    const bool y_test = test_lot.count(p.y) != 0;
    if (x_test && y_test) {
      split.test.push_back(p);
    } else if (!x_test && !y_test) {
      split.train.push_back(p);
    } else {
      ++split.discarded;
    }
  }
  if (split.train.empty() || split.test.empty()) {
    throw EmptySplitError("lexical split left the " + std::string(split.train.empty() ? "train" : "test") +
                          " side empty (" + std::to_string(split.discarded) + " of " +
                          std::to_string(pairs.size()) + " pairs discarded)");
  }
  return split;
}

PartitionCounts partition_counts(std::size_t n, double unlabeled_fraction, double validation_fraction) {
  PartitionCounts c;
  c.unlabeled = std::min(n, round_count(unlabeled_fraction * static_cast<double>(n)));
  const std::size_t rest = n - c.unlabeled;
  c.validation = std::min(rest, round_count(validation_fraction * static_cast<double>(rest)));
  c.labeled = rest - c.validation;
  return c;
}

namespace {

// Largest-remainder split of `total` proportional to `sizes`; remainder ties
// go to the earlier group.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, std::size_t total) {
  std::size_t n = 0;
  for (std::size_t s : sizes) n += s;
  std::vector<std::size_t> out(sizes.size(), 0);
  if (n == 0) return out;
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (numerator remainder, group)
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    out[g] = sizes[g] * total / n;
    assigned += out[g];
    remainders.emplace_back(sizes[g] * total % n, g);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[remainders[k].second];
  return out;
}

}  // namespace

SplitBundle partition_train(std::span<const WordPair> train_side, double unlabeled_fraction,
                            double validation_fraction, std::uint64_t seed, bool stratified) {
  check_fraction(unlabeled_fraction, "unlabeled_fraction");
  check_fraction(validation_fraction, "validation_fraction");

  std::map<Relation, std::vector<WordPair>> groups;
  if (stratified) {
    for (const auto& p : train_side) groups[p.label].push_back(p);
    std::string small;
    for (const auto& [rel, members] : groups) {
      if (members.size() < 3) {
        small += (small.empty() ? "" : ", ") + std::string(to_string(rel)) + " (" +
                 std::to_string(members.size()) + ")";
      }
    }
    if (!small.empty()) {
      throw std::invalid_argument("stratified partition needs at least 3 pairs per class; too few: " + small);
    }
  } else {
    groups[Relation::random] = {train_side.begin(), train_side.end()};
  }

  // Totals come from the whole train side and are apportioned to classes,
  // so stratification never moves a part size by more than rounding.
  const auto total = partition_counts(train_side.size(), unlabeled_fraction, validation_fraction);
  std::vector<std::size_t> sizes;
  for (const auto& [rel, members] : groups) sizes.push_back(members.size());
  const auto u_share = apportion(sizes, total.unlabeled);
  std::vector<std::size_t> rest;
  for (std::size_t g = 0; g < sizes.size(); ++g) rest.push_back(sizes[g] - u_share[g]);
  const auto v_share = apportion(rest, total.validation);

  Rng rng(seed);
  SplitBundle bundle;
  std::vector<WordPair> unlabeled;
  std::size_t g = 0;
  for (auto& [rel, members] : groups) {
    rng.shuffle(std::span(members));
    auto it = members.begin();
    unlabeled.insert(unlabeled.end(), it, it + static_cast<std::ptrdiff_t>(u_share[g]));
    it += static_cast<std::ptrdiff_t>(u_share[g]);
    bundle.validation.insert(bundle.validation.end(), it, it + static_cast<std::ptrdiff_t>(v_share[g]));
    it += static_cast<std::ptrdiff_t>(v_share[g]);
    bundle.train.insert(bundle.train.end(), it, members.end());
    ++g;
  }
  bundle.unlabeled = UnlabeledPool(std::move(unlabeled));
  return bundle;
}

}  // namespace relmtl::data
