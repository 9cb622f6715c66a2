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

#ifndef RELMTL_TESTS_METRIC_ORACLE_HPP_
#define RELMTL_TESTS_METRIC_ORACLE_HPP_

#include <cstddef>
#include <vector>

namespace relmtl::testing {

struct MetricOracle {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

// Brute force from a full confusion matrix.
inline MetricOracle metric_oracle(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& gold,
                                  std::size_t k) {
  std::vector<std::vector<double>> cm(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i) cm[gold[i]][pred[i]] += 1.0;
  MetricOracle o;
  double diag = 0.0;
  for (std::size_t c = 0; c < k; ++c) diag += cm[c][c];
  o.accuracy = diag / static_cast<double>(pred.size());
  for (std::size_t c = 0; c < k; ++c) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm[c][j];
      col += cm[j][c];
    }
    const double tp = cm[c][c];
    const double p = col == 0.0 ? 0.0 : tp / col;
    const double r = row == 0.0 ? 0.0 : tp / row;
    o.macro_f1 += p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
  o.macro_f1 /= static_cast<double>(k);
  return o;
}

// Calls visit(pred, gold, k) for every labeling with k in {2, 3}, n <= 6.
template <typename Visit>
void for_each_small_case(Visit visit) {
  for (std::size_t k = 2; k <= 3; ++k) {
    for (std::size_t n = 1; n <= 6; ++n) {
      std::size_t combos = 1;
      for (std::size_t i = 0; i < 2 * n; ++i) combos *= k;
      for (std::size_t code = 0; code < combos; ++code) {
        std::vector<std::size_t> pred(n), gold(n);
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
          pred[i] = c % k;
          c /= k;
          gold[i] = c % k;
          c /= k;
        }
        visit(pred, gold, k);
      }
    }
  }
}

}  // namespace relmtl::testing

#endif  // RELMTL_TESTS_METRIC_ORACLE_HPP_
