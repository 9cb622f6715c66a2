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

#ifndef RELMTL_LOGREG_HPP_
#define RELMTL_LOGREG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "relmtl/matrix.hpp"

namespace relmtl::eval {

/// Multinomial logistic regression, weights (classes x features).
struct LogRegModel {
  Matrix weights;
  std::vector<double> bias;
  double l2_lambda = 0.0;

  std::size_t classes() const noexcept { return weights.rows(); }
  std::size_t features() const noexcept { return weights.cols(); }
};

struct LogRegConfig {
  // Objective: mean cross-entropy + (l2_lambda / 2) * ||W||^2 (bias not
  // penalized). Unset means 1 / (C * n) with C = 1, i.e. the scaling of an
  // inverse-regularization parameter C applied to the summed loss.
  std::optional<double> l2_lambda;
  std::size_t epochs = 500;           // full-batch iterations
  double learning_rate = 1.0;         // largest step along the preconditioned gradient
                                      // (halved until the objective decreases)
  double tolerance = 1e-6;            // stop when the gradient norm falls below this
  std::uint64_t seed = 0;
};

struct LogRegResult {
  LogRegModel model;
  double gradient_norm = 0.0;  // at the returned parameters
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Full-batch gradient descent with a diagonal preconditioner and
/// backtracking. Parameters start at zero, so the result does not depend on
/// `seed`; it is kept for a uniform trainer interface. Throws
/// std::invalid_argument unless at least two classes occur in `labels`.
LogRegResult train_logreg(const Matrix& features, std::span<const std::size_t> labels, std::size_t classes,
                          const LogRegConfig& config = {});

/// Class probabilities, one row per example.
Matrix logreg_predict_proba(const LogRegModel& model, const Matrix& features);
std::vector<std::size_t> logreg_predict(const LogRegModel& model, const Matrix& features);

/// Mean cross-entropy, plus the L2 term when `with_penalty`.
double logreg_objective(const LogRegModel& model, const Matrix& features, std::span<const std::size_t> labels,
                        bool with_penalty = true);

/// Gradient of logreg_objective (with penalty): (dW, db).
std::pair<Matrix, std::vector<double>> logreg_gradient(const LogRegModel& model, const Matrix& features,
                                                       std::span<const std::size_t> labels);

}  // namespace relmtl::eval

#endif  // RELMTL_LOGREG_HPP_
