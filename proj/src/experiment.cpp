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

#include "relmtl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "relmtl/error.hpp"
#include "relmtl/logreg.hpp"
#include "relmtl/metrics.hpp"
#include "relmtl/rng.hpp"

namespace relmtl::cli {

using json = nlohmann::ordered_json;

std::string ResultRecord::to_json() const {
  json j;
  j["record"] = "result";
  j["dataset"] = dataset;
  j["task"] = task;
  j["regime"] = regime;
  j["seed"] = seed;
  j["accuracy"] = accuracy;
  j["macro_f1"] = macro_f1;
  j["test_size"] = test_size;
  j["config_hash"] = config_hash;
  if (self_learning_iterations) j["self_learning_iterations"] = *self_learning_iterations;
  if (pseudo_label_noise) j["pseudo_label_noise"] = *pseudo_label_noise;
  return j.dump();
}

ResultRecord ResultRecord::from_json(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    if (j.at("record") != "result") throw FormatError("not a result record");
    ResultRecord r;
    r.dataset = j.at("dataset").get<std::string>();
    r.task = j.at("task").get<std::string>();
    r.regime = j.at("regime").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.test_size = j.at("test_size").get<std::size_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    if (j.contains("self_learning_iterations")) {
      r.self_learning_iterations = j["self_learning_iterations"].get<std::size_t>();
    }
    if (j.contains("pseudo_label_noise")) r.pseudo_label_noise = j["pseudo_label_noise"].get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("result record: ") + e.what());
  }
}

std::string AggregateRecord::to_json() const {
  json j;
  j["record"] = "aggregate";
  j["dataset"] = dataset;
  j["task"] = task;
  j["regime"] = regime;
  j["seeds"] = seeds;
  j["accuracy_mean"] = accuracy_mean;
  j["accuracy_std"] = accuracy_std;
  j["macro_f1_mean"] = macro_f1_mean;
  j["macro_f1_std"] = macro_f1_std;
  j["config_hash"] = config_hash;
  return j.dump();
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

std::vector<AggregateRecord> aggregate(std::span<const ResultRecord> results) {
  // Groups keep first-appearance order.
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const ResultRecord*>> groups;
  for (const auto& r : results) {
    auto key = std::make_tuple(r.dataset, r.regime, r.task);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<AggregateRecord> out;
  for (const auto& key : order) {
    const auto& members = groups[key];
    std::vector<double> acc, f1;
    for (const auto* r : members) {
      acc.push_back(r->accuracy);
      f1.push_back(r->macro_f1);
    }
    AggregateRecord a;
    std::tie(a.dataset, a.regime, a.task) = key;
    a.seeds = members.size();
    std::tie(a.accuracy_mean, a.accuracy_std) = mean_std(acc);
    std::tie(a.macro_f1_mean, a.macro_f1_std) = mean_std(f1);
    a.config_hash = members.front()->config_hash;
    out.push_back(std::move(a));
  }
  return out;
}

bool AuditLog::test_read_after_training() const {
  bool test_seen = false;
  for (const auto& e : events_) {
    if (e.rfind("read test", 0) == 0) test_seen = true;
    if (test_seen && (e.rfind("train", 0) == 0 || e.rfind("read labeled", 0) == 0 ||
                      e.rfind("read validation", 0) == 0 || e.rfind("read unlabeled", 0) == 0)) {
      return false;
    }
  }
  return test_seen;
}

std::vector<PreparedTask> prepare_tasks(std::span<const data::RelationTask> tasks,
                                        std::span<const data::WordPair> labeled,
                                        std::span<const data::WordPair> validation,
                                        const data::UnlabeledPool& unlabeled, const data::EmbeddingTable& table) {
  std::vector<PreparedTask> out;
  for (const auto& task : tasks) {
    PreparedTask p;
    p.task = task;
    const auto l = data::task_pairs(labeled, task);
    const auto v = data::task_pairs(validation, task);
    const auto u = data::task_pairs(unlabeled.audit(), task);
    if (l.empty() || v.empty()) {
      throw EmptySplitError("task " + task.name() + ": labeled or validation set is empty");
    }
    p.labeled_x = data::encode_pairs(table, l);
    p.labeled_y = data::task_labels(l, task);
    p.validation_x = data::encode_pairs(table, v);
    p.validation_y = data::task_labels(v, task);
    p.unlabeled_x = data::encode_pairs(table, u);
    p.unlabeled_gold = data::task_labels(u, task);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::string task_key(std::span<const PreparedTask> tasks) {
  std::string key;
  for (const auto& t : tasks) key += (key.empty() ? "" : "+") + t.task.name();
  return key;
}

}  // namespace

std::uint64_t init_seed(std::uint64_t seed, std::span<const PreparedTask> tasks) {
  return derive_seed(seed, "init/" + task_key(tasks));
}

std::uint64_t batch_seed(std::uint64_t seed, std::span<const PreparedTask> tasks) {
  return derive_seed(seed, "batches/" + task_key(tasks));
}

std::vector<mtl::TaskData> task_data(std::span<const PreparedTask> tasks) {
  std::vector<mtl::TaskData> out;
  for (const auto& t : tasks) out.push_back({t.labeled_x, t.labeled_y, t.validation_x, t.validation_y});
  return out;
}

namespace {

mtl::MultiTaskModel fresh_model(std::span<const PreparedTask> tasks, const NeuralOptions& options,
                                std::uint64_t seed) {
  std::vector<std::size_t> classes(tasks.size(), data::RelationTask::kClasses);
  return mtl::build_model(tasks.front().labeled_x.cols(), options.hidden, classes, init_seed(seed, tasks),
                          {options.train.learning_rate, options.train.rho, options.train.epsilon});
}

}  // namespace

mtl::TrainResult train_network(std::span<const PreparedTask> tasks, const NeuralOptions& options,
                               std::uint64_t seed) {
  auto cfg = options.train;
  cfg.seed = batch_seed(seed, tasks);
  const auto data = task_data(tasks);
  return mtl::train_multitask(fresh_model(tasks, options, seed), data, cfg);
}

SelfTrainOutcome self_train_network(std::span<const PreparedTask> tasks, const NeuralOptions& options,
                                    std::uint64_t seed) {
  // Example ids: [0, |L0|) are the labeled rows, [|L0|, |L0|+|U0|) the unlabeled rows.
  std::vector<Matrix> pool_x;
  std::vector<selflearn::TaskPool> pools;
  for (const auto& t : tasks) {
    const std::size_t nl = t.labeled_y.size();
    const std::size_t nu = t.unlabeled_gold.size();
    Matrix x(nl + nu, t.labeled_x.cols());
    for (std::size_t r = 0; r < nl; ++r) {
      std::copy(t.labeled_x.row(r).begin(), t.labeled_x.row(r).end(), x.row(r).begin());
    }
    for (std::size_t r = 0; r < nu; ++r) {
      std::copy(t.unlabeled_x.row(r).begin(), t.unlabeled_x.row(r).end(), x.row(nl + r).begin());
    }
    pool_x.push_back(std::move(x));
    selflearn::TaskPool pool;
    pool.num_classes = data::RelationTask::kClasses;
    for (std::size_t r = 0; r < nl; ++r) pool.labeled.push_back({r, t.labeled_y[r], false});
    for (std::size_t r = 0; r < nu; ++r) pool.unlabeled.push_back(nl + r);
    pools.push_back(std::move(pool));
  }

  const std::uint64_t batches = batch_seed(seed, tasks);
  auto round = std::make_shared<std::size_t>(0);

  selflearn::Trainer<mtl::MultiTaskModel> trainer;
  trainer.train = [&, round](std::span<const selflearn::TaskPool> current,
                             const mtl::MultiTaskModel* previous) -> mtl::MultiTaskModel {
    std::vector<mtl::TaskData> data;
    for (std::size_t i = 0; i < current.size(); ++i) {
      mtl::TaskData d;
      std::vector<std::size_t> ids;
      for (const auto& ex : current[i].labeled) {
        ids.push_back(ex.id);
        d.train_y.push_back(ex.label);
      }
      d.train_x = pool_x[i].gather_rows(ids);
      d.val_x = tasks[i].validation_x;
      d.val_y = tasks[i].validation_y;
      data.push_back(std::move(d));
    }
    auto cfg = options.train;
    cfg.seed = *round == 0 ? batches : derive_seed(batches, "retrain/" + std::to_string(*round));
    ++*round;
    if (previous) {
      cfg.epochs = options.retrain_epochs;
      return mtl::train_multitask(*previous, data, cfg).model;
    }
    return mtl::train_multitask(fresh_model(tasks, options, seed), data, cfg).model;
  };
  trainer.score = [&](const mtl::MultiTaskModel& model, std::size_t task, std::span<const std::size_t> ids) {
    return mtl::predict(model, task, pool_x[task].gather_rows(ids));
  };
  trainer.validate = [&](const mtl::MultiTaskModel& model) {
    double total = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      total += mtl::evaluate(model, i, tasks[i].validation_x, tasks[i].validation_y).accuracy;
    }
    return total / static_cast<double>(tasks.size());
  };

  auto result = selflearn::self_learn(trainer, std::move(pools), options.self_learn);

  // Noise among the pseudo-labels the best model was trained with.
  std::size_t pseudo = 0;
  std::size_t wrong = 0;
  const auto& best_rec = result.state.history.at(result.state.best_iteration);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& labeled = result.state.pools[i].labeled;
    const std::size_t nl = tasks[i].labeled_y.size();
    for (std::size_t k = 0; k < best_rec.labeled_per_task[i]; ++k) {
      if (!labeled[k].pseudo) continue;
      ++pseudo;
      wrong += labeled[k].label != tasks[i].unlabeled_gold[labeled[k].id - nl] ? 1 : 0;
    }
  }
  return {std::move(result.best), std::move(result.state),
          pseudo == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(pseudo)};
}

namespace {

using Predictor = std::function<std::vector<std::size_t>(const Matrix&)>;

struct CellOutput {
  std::vector<Predictor> per_task;  // indexed like config.tasks
  std::optional<std::size_t> iterations;
  std::vector<std::optional<double>> noise;
  double seconds = 0.0;
};

Predictor network_predictor(std::shared_ptr<const mtl::MultiTaskModel> model, std::size_t head) {
  return [model, head](const Matrix& x) { return mtl::predict_labels(*model, head, x); };
}

CellOutput train_cell(const ExperimentConfig& cfg, Regime regime, std::uint64_t seed,
                      std::span<const PreparedTask> tasks) {
  const auto start = std::chrono::steady_clock::now();
  NeuralOptions opts{cfg.hidden, cfg.train, cfg.self_learn, cfg.retrain_epochs};
  CellOutput out;
  out.per_task.resize(tasks.size());
  out.noise.resize(tasks.size());
  switch (regime) {
    case Regime::baseline_majority:
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto m = eval::majority_baseline(tasks[i].labeled_y, data::RelationTask::kClasses);
        out.per_task[i] = [m](const Matrix& x) { return m.predict(x.rows()); };
      }
      break;
    case Regime::baseline_logreg:
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto lr_cfg = cfg.logreg;
        lr_cfg.seed = derive_seed(seed, "logreg/" + tasks[i].task.name());
        auto model = std::make_shared<eval::LogRegModel>(
            eval::train_logreg(tasks[i].labeled_x, tasks[i].labeled_y, data::RelationTask::kClasses, lr_cfg)
                .model);
        out.per_task[i] = [model](const Matrix& x) { return eval::logreg_predict(*model, x); };
      }
      break;
    case Regime::nn_single:
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto model = std::make_shared<const mtl::MultiTaskModel>(train_network(tasks.subspan(i, 1), opts, seed).model);
        out.per_task[i] = network_predictor(model, 0);
      }
      break;
    case Regime::self_learning:
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto res = self_train_network(tasks.subspan(i, 1), opts, seed);
        out.per_task[i] = network_predictor(std::make_shared<const mtl::MultiTaskModel>(std::move(res.model)), 0);
        out.noise[i] = res.pseudo_label_noise;
        out.iterations = std::max(out.iterations.value_or(0), res.state.t);
      }
      break;
    case Regime::multitask: {
      auto model = std::make_shared<const mtl::MultiTaskModel>(train_network(tasks, opts, seed).model);
      for (std::size_t i = 0; i < tasks.size(); ++i) out.per_task[i] = network_predictor(model, i);
      break;
    }
    case Regime::multitask_self_learning: {
      auto res = self_train_network(tasks, opts, seed);
      auto model = std::make_shared<const mtl::MultiTaskModel>(std::move(res.model));
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        out.per_task[i] = network_predictor(model, i);
        out.noise[i] = res.pseudo_label_noise;
      }
      out.iterations = res.state.t;
      break;
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

data::EmbeddingTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings '" + path + "'");
  try {
    auto load = data::load_embeddings(in);
    if (load.duplicates > 0) {
      std::cerr << "warning: " << path << ": " << load.duplicates << " duplicate words, first vectors kept\n";
    }
    return std::move(load.table);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace

std::vector<PreparedTask> load_prepared_tasks(const std::string& split_dir, const std::string& embeddings,
                                              std::span<const data::RelationTask> tasks) {
  const auto manifest = data::read_manifest(split_dir);
  const auto labeled = data::read_split_part(split_dir, data::SplitPart::labeled, manifest);
  const auto validation = data::read_split_part(split_dir, data::SplitPart::validation, manifest);
  const data::UnlabeledPool unlabeled(data::read_split_part(split_dir, data::SplitPart::unlabeled, manifest));
  return prepare_tasks(tasks, labeled, validation, unlabeled, load_table(embeddings));
}

RunOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunOutput run;
  auto& audit = run.audit;

  const auto manifest = data::read_manifest(config.split_dir);
  audit.record("read manifest");
  const auto labeled = data::read_split_part(config.split_dir, data::SplitPart::labeled, manifest);
  audit.record("read labeled");
  const auto validation = data::read_split_part(config.split_dir, data::SplitPart::validation, manifest);
  audit.record("read validation");
  const data::UnlabeledPool unlabeled(
      data::read_split_part(config.split_dir, data::SplitPart::unlabeled, manifest));
  audit.record("read unlabeled");

  const bool needs_features = std::any_of(config.regimes.begin(), config.regimes.end(),
                                          [](Regime r) { return r != Regime::baseline_majority; });
  data::EmbeddingTable table;
  if (needs_features) {
    table = load_table(config.embeddings);
    audit.record("read embeddings");
  }

  std::vector<PreparedTask> tasks;
  if (needs_features) {
    tasks = prepare_tasks(config.tasks, labeled, validation, unlabeled, table);
  } else {
    // Majority only needs labels.
    for (const auto& t : config.tasks) {
      PreparedTask p;
      p.task = t;
      p.labeled_y = data::task_labels(data::task_pairs(labeled, t), t);
      if (p.labeled_y.empty()) throw EmptySplitError("task " + t.name() + ": labeled set is empty");
      tasks.push_back(std::move(p));
    }
  }

  struct Cell {
    Regime regime;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (Regime r : config.regimes) {
    for (std::uint64_t s : config.seeds) cells.push_back({r, s});
  }
  std::vector<CellOutput> outputs(cells.size());
  std::vector<std::string> failures(cells.size());
  const auto n_cells = static_cast<std::ptrdiff_t>(cells.size());
  // Cells own their models; slots are written by exactly one thread.
#pragma omp parallel for schedule(dynamic, 1) if (config.parallel_cells)
  for (std::ptrdiff_t c = 0; c < n_cells; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    try {
      const std::uint64_t cell_seed = derive_seed(cells[idx].seed, "cell");
      outputs[idx] = train_cell(config, cells[idx].regime, cell_seed, tasks);
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!failures[c].empty()) {
      throw std::runtime_error("regime " + std::string(to_string(cells[c].regime)) + " seed " +
                               std::to_string(cells[c].seed) + ": " + failures[c]);
    }
    audit.record("train " + std::string(to_string(cells[c].regime)) + " seed " + std::to_string(cells[c].seed));
  }

  const auto test = data::read_split_part(config.split_dir, data::SplitPart::test, manifest);
  audit.record("read test");

  std::vector<Matrix> test_x(tasks.size());
  std::vector<std::vector<std::size_t>> test_y(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto pairs = data::task_pairs(test, tasks[i].task);
    if (pairs.empty()) throw EmptySplitError("task " + tasks[i].task.name() + ": test set is empty");
    test_y[i] = data::task_labels(pairs, tasks[i].task);
    test_x[i] = needs_features ? data::encode_pairs(table, pairs) : Matrix(pairs.size(), 0);
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const auto pred = outputs[c].per_task[i](test_x[i]);
      ResultRecord rec;
      rec.dataset = config.dataset;
      rec.task = tasks[i].task.name();
      rec.regime = std::string(to_string(cells[c].regime));
      rec.seed = cells[c].seed;
      rec.accuracy = eval::accuracy(pred, test_y[i]);
      rec.macro_f1 = eval::macro_f1(pred, test_y[i], data::RelationTask::kClasses);
      rec.test_size = test_y[i].size();
      rec.config_hash = config.config_hash;
      rec.self_learning_iterations = outputs[c].iterations;
      rec.pseudo_label_noise = outputs[c].noise[i];
      run.results.push_back(std::move(rec));
    }
    json t;
    t["record"] = "timing";
    t["regime"] = std::string(to_string(cells[c].regime));
    t["seed"] = cells[c].seed;
    t["seconds"] = outputs[c].seconds;
    run.timings.push_back(t.dump());
  }
  audit.record("evaluate");
  run.aggregates = aggregate(run.results);
  return run;
}

void write_results(std::ostream& out, const RunOutput& run) {
  for (const auto& r : run.results) out << r.to_json() << '\n';
  for (const auto& a : run.aggregates) out << a.to_json() << '\n';
}

}  // namespace relmtl::cli
