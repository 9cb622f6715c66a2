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

#include "relmtl/selflearn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "relmtl/error.hpp"

namespace relmtl::selflearn {

std::vector<std::size_t> largest_remainder_quotas(std::span<const double> proportions, std::size_t total) {
  const std::size_t k = proportions.size();
  std::vector<std::size_t> quotas(k, 0);
  if (k == 0) return quotas;
  std::vector<double> remainders(k);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double exact = proportions[c] * static_cast<double>(total);
    quotas[c] = static_cast<std::size_t>(std::floor(exact));
    remainders[c] = exact - static_cast<double>(quotas[c]);
    assigned += quotas[c];
  }
  // Floating error can push the floors one past the total.
  while (assigned > total) {
    auto it = std::max_element(quotas.begin(), quotas.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % k) {
    if (proportions[order[i]] > 0.0 || std::all_of(proportions.begin(), proportions.end(),
                                                    [](double p) { return p <= 0.0; })) {
      ++quotas[order[i]];
      ++assigned;
    }
  }
  return quotas;
}

std::vector<Selection> stratified_select(const Matrix& class_probs, std::span<const double> base_distribution,
                                         std::int64_t n) {
  if (n <= 0) {
    throw std::invalid_argument("stratified_select: N must be positive");
  }
  const std::size_t classes = class_probs.cols();
  if (base_distribution.size() != classes || classes == 0) {
    throw std::invalid_argument("stratified_select: base distribution has " +
                                std::to_string(base_distribution.size()) + " classes, probabilities have " +
                                std::to_string(classes));
  }
  double mass = 0.0;
  for (double p : base_distribution) {
    if (!(p >= 0.0)) throw std::invalid_argument("stratified_select: negative class proportion");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw std::invalid_argument("stratified_select: base distribution must sum to 1");
  }

  const std::size_t pool = class_probs.rows();
  const std::size_t target = std::min(static_cast<std::size_t>(n), pool);
  const auto quotas = largest_remainder_quotas(base_distribution, target);

  std::vector<std::size_t> class_order(classes);
  std::iota(class_order.begin(), class_order.end(), 0);
  std::stable_sort(class_order.begin(), class_order.end(),
                   [&](std::size_t a, std::size_t b) { return quotas[a] > quotas[b]; });

  std::vector<bool> taken(pool, false);
  std::vector<std::size_t> ranked(pool);
  std::vector<Selection> picks;
  picks.reserve(target);
  for (std::size_t c : class_order) {
    if (quotas[c] == 0) continue;
    std::iota(ranked.begin(), ranked.end(), 0);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return class_probs(a, c) > class_probs(b, c); });
    std::size_t got = 0;
    for (std::size_t idx : ranked) {
      if (got == quotas[c]) break;
      if (taken[idx]) continue;
      taken[idx] = true;
      picks.push_back({idx, c});
      ++got;
    }
  }
  return picks;
}

std::string_view to_string(RetrainMode m) {
  return m == RetrainMode::warm_start ? "warm_start" : "from_scratch";
}

RetrainMode retrain_mode_from_string(std::string_view s) {
  if (s == "warm_start") return RetrainMode::warm_start;
  if (s == "from_scratch") return RetrainMode::from_scratch;
  throw std::invalid_argument("unknown retrain mode '" + std::string(s) + "'");
}

std::size_t default_batch(std::size_t unlabeled) {
  const auto five_percent = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(unlabeled)));
  return std::max<std::size_t>(32, five_percent);
}

std::vector<double> class_distribution(const TaskPool& pool) {
  std::vector<double> dist(pool.num_classes, 0.0);
  for (const auto& ex : pool.labeled) dist.at(ex.label) += 1.0;
  for (auto& d : dist) d /= static_cast<double>(pool.labeled.size());
  return dist;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::none:
      return "none";
    case StopReason::unlabeled_exhausted:
      return "unlabeled_exhausted";
    case StopReason::validation_degraded:
      return "validation_degraded";
    case StopReason::max_iterations:
      return "max_iterations";
  }
  return "none";
}

StopReason stop_reason_from_string(std::string_view s) {
  for (auto r : {StopReason::none, StopReason::unlabeled_exhausted, StopReason::validation_degraded,
                 StopReason::max_iterations}) {
    if (to_string(r) == s) return r;
  }
  throw std::invalid_argument("unknown stop reason '" + std::string(s) + "'");
}

namespace detail {

void check_pools(std::span<const TaskPool> pools) {
  if (pools.empty()) throw std::invalid_argument("self_learn: no tasks");
  for (std::size_t i = 0; i < pools.size(); ++i) {
    const auto& p = pools[i];
    if (p.labeled.empty()) {
      throw std::invalid_argument("self_learn: task " + std::to_string(i) + " has an empty labeled set");
    }
    if (p.num_classes < 2) throw std::invalid_argument("self_learn: tasks need at least two classes");
    for (const auto& ex : p.labeled) {
      if (ex.label >= p.num_classes) throw std::invalid_argument("self_learn: label outside the class range");
    }
  }
}

std::vector<std::size_t> batch_sizes(std::span<const TaskPool> pools, const SelfLearnConfig& config) {
  if (config.n_per_iteration && *config.n_per_iteration == 0) {
    throw std::invalid_argument("self_learn: N must be at least 1");
  }
  std::vector<std::size_t> out;
  for (const auto& p : pools) out.push_back(config.n_per_iteration.value_or(default_batch(p.unlabeled.size())));
  return out;
}

void move_selected(TaskPool& pool, std::span<const Selection> picks) {
  std::vector<bool> moved(pool.unlabeled.size(), false);
  for (const auto& s : picks) {
    moved.at(s.index) = true;
    pool.labeled.push_back({pool.unlabeled[s.index], s.label, true});
  }
  std::vector<std::size_t> rest;
  rest.reserve(pool.unlabeled.size() - picks.size());
  for (std::size_t k = 0; k < pool.unlabeled.size(); ++k) {
    if (!moved[k]) rest.push_back(pool.unlabeled[k]);
  }
  pool.unlabeled = std::move(rest);
}

IterationRecord make_record(std::size_t t, double score, std::span<const TaskPool> pools) {
  IterationRecord rec;
  rec.t = t;
  rec.validation = score;
  for (const auto& p : pools) {
    rec.labeled_per_task.push_back(p.labeled.size());
    rec.unlabeled_per_task.push_back(p.unlabeled.size());
    rec.labeled += p.labeled.size();
    rec.unlabeled += p.unlabeled.size();
  }
  return rec;
}

}  // namespace detail

void write_log(std::ostream& out, std::span<const IterationRecord> history) {
  for (const auto& rec : history) {
    nlohmann::ordered_json j;
    j["t"] = rec.t;
    j["labeled"] = rec.labeled;
    j["unlabeled"] = rec.unlabeled;
    j["validation"] = rec.validation;
    j["labeled_per_task"] = rec.labeled_per_task;
    j["unlabeled_per_task"] = rec.unlabeled_per_task;
    if (rec.stopped_reason == StopReason::none) {
      j["stopped_reason"] = nullptr;
    } else {
      j["stopped_reason"] = std::string(to_string(rec.stopped_reason));
    }
    out << j.dump() << '\n';
  }
}

std::vector<IterationRecord> read_log(std::istream& in) {
  std::vector<IterationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      IterationRecord rec;
      rec.t = j.at("t").get<std::size_t>();
      rec.labeled = j.at("labeled").get<std::size_t>();
      rec.unlabeled = j.at("unlabeled").get<std::size_t>();
      rec.validation = j.at("validation").get<double>();
      rec.labeled_per_task = j.at("labeled_per_task").get<std::vector<std::size_t>>();
      rec.unlabeled_per_task = j.at("unlabeled_per_task").get<std::vector<std::size_t>>();
      const auto& reason = j.at("stopped_reason");
      rec.stopped_reason = reason.is_null() ? StopReason::none : stop_reason_from_string(reason.get<std::string>());
      out.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw FormatError(std::string("self-learning log: ") + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace relmtl::selflearn
