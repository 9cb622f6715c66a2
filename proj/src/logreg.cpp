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

#include "relmtl/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relmtl/kernels.hpp"
#include "relmtl/nn.hpp"

namespace relmtl::eval {
namespace {

void check_data(const Matrix& x, std::span<const std::size_t> y, std::size_t classes) {
  if (x.rows() != y.size() || y.empty()) {
    throw std::invalid_argument("logistic regression: feature/label count mismatch or empty data");
  }
  for (std::size_t v : y) {
    if (v >= classes) throw std::invalid_argument("logistic regression: label outside the class range");
  }
}

double penalty(const LogRegModel& m) {
  double s = 0.0;
  for (double w : m.weights.values()) s += w * w;
  return 0.5 * m.l2_lambda * s;
}

// Softmax rows of x W^T + b, written into `probs`.
void probabilities(const LogRegModel& m, const Matrix& x, Matrix& probs) {
  kernels::affine(x, m.weights, m.bias, probs);
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    auto p = nn::softmax(probs.row(r));
    std::copy(p.begin(), p.end(), probs.row(r).begin());
  }
}

double gradient_norm(const Matrix& gw, std::span<const double> gb) {
  double s = 0.0;
  for (double v : gw.values()) s += v * v;
  for (double v : gb) s += v * v;
  return std::sqrt(s);
}

}  // namespace

Matrix logreg_predict_proba(const LogRegModel& model, const Matrix& features) {
  if (features.cols() != model.features()) {
    throw std::invalid_argument("logistic regression: feature dimension mismatch");
  }
  Matrix probs(features.rows(), model.classes());
  probabilities(model, features, probs);
  return probs;
}

std::vector<std::size_t> logreg_predict(const LogRegModel& model, const Matrix& features) {
  return nn::argmax_rows(logreg_predict_proba(model, features));
}

double logreg_objective(const LogRegModel& model, const Matrix& features, std::span<const std::size_t> labels,
                        bool with_penalty) {
  check_data(features, labels, model.classes());
  const Matrix probs = logreg_predict_proba(model, features);
  double loss = 0.0;
  for (std::size_t r = 0; r < labels.size(); ++r) loss += nn::cross_entropy(probs.row(r), labels[r]);
  loss /= static_cast<double>(labels.size());
  return with_penalty ? loss + penalty(model) : loss;
}

std::pair<Matrix, std::vector<double>> logreg_gradient(const LogRegModel& model, const Matrix& features,
                                                       std::span<const std::size_t> labels) {
  check_data(features, labels, model.classes());
  Matrix delta = logreg_predict_proba(model, features);
  for (std::size_t r = 0; r < labels.size(); ++r) delta(r, labels[r]) -= 1.0;
  Matrix gw(model.classes(), model.features());
  std::vector<double> gb(model.classes(), 0.0);
  kernels::weight_grad(delta, features, 1.0 / static_cast<double>(labels.size()), gw, gb);
  auto g = gw.values();
  auto w = model.weights.values();
  for (std::size_t k = 0; k < g.size(); ++k) g[k] += model.l2_lambda * w[k];
  return {std::move(gw), std::move(gb)};
}

LogRegResult train_logreg(const Matrix& features, std::span<const std::size_t> labels, std::size_t classes,
                          const LogRegConfig& config) {
  check_data(features, labels, classes);
  std::vector<bool> present(classes, false);
  for (std::size_t y : labels) present[y] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw std::invalid_argument("logistic regression needs at least two classes in the training data");
  }
  const double lambda = config.l2_lambda.value_or(1.0 / static_cast<double>(labels.size()));
  if (!(lambda >= 0.0)) throw std::invalid_argument("logistic regression: l2_lambda must be >= 0");

  LogRegResult res;
  res.model = {Matrix(classes, features.cols()), std::vector<double>(classes, 0.0), lambda};
  res.objective = logreg_objective(res.model, features, labels);
  double step = config.learning_rate;

  // Diagonal preconditioner from a curvature bound (softmax variance <= 1/4)
  // plus the penalty, so the step scale does not depend on lambda.
  std::vector<double> h_w(features.cols(), 0.0);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto row = features.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) h_w[j] += row[j] * row[j];
  }
  for (double& h : h_w) h = 0.25 * h / static_cast<double>(features.rows()) + lambda + 1e-12;
  const double h_b = 0.25;

  for (res.iterations = 0; res.iterations < config.epochs; ++res.iterations) {
    auto [gw, gb] = logreg_gradient(res.model, features, labels);
    res.gradient_norm = gradient_norm(gw, gb);
    if (res.gradient_norm < config.tolerance) break;
    auto dw = gw;
    auto dwv = dw.values();
    for (std::size_t k = 0; k < dwv.size(); ++k) dwv[k] /= h_w[k % features.cols()];
    std::vector<double> db(gb);
    for (double& v : db) v /= h_b;
    double slope = 0.0;  // g . d
    for (std::size_t k = 0; k < dwv.size(); ++k) slope += gw.values()[k] * dwv[k];
    for (std::size_t c = 0; c < classes; ++c) slope += gb[c] * db[c];
    // Backtracking (Armijo) on the step size.
    while (true) {
      LogRegModel trial = res.model;
      auto tw = trial.weights.values();
      for (std::size_t k = 0; k < tw.size(); ++k) tw[k] -= step * dwv[k];
      for (std::size_t c = 0; c < classes; ++c) trial.bias[c] -= step * db[c];
      const double obj = logreg_objective(trial, features, labels);
      if (obj <= res.objective - 0.5 * step * slope || step < 1e-12) {
        res.model = std::move(trial);
        res.objective = obj;
        break;
      }
      step *= 0.5;
    }
    step = std::min(step * 2.0, config.learning_rate);
  }
  auto [gw, gb] = logreg_gradient(res.model, features, labels);
  res.gradient_norm = gradient_norm(gw, gb);
  return res;
}

}  // namespace relmtl::eval
