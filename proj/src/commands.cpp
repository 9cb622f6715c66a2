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

#include "relmtl/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relmtl/checkpoint.hpp"
#include "relmtl/config.hpp"
#include "relmtl/embeddings.hpp"
#include "relmtl/error.hpp"
#include "relmtl/experiment.hpp"
#include "relmtl/hash.hpp"
#include "relmtl/report.hpp"
#include "relmtl/split_io.hpp"
#include "relmtl/splits.hpp"
#include "relmtl/taxonomy.hpp"
#include "relmtl/text_io.hpp"

namespace relmtl::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& bytes) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << bytes;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// ---- split ----

struct SplitArgs {
  std::string pairs;
  std::string out;
  std::string embeddings;
  std::uint64_t seed = 0;
  double test_fraction = 0.4;
  double unlabeled_fraction = 0.6;
  double validation_fraction = 0.3;
  bool no_stratify = false;
};

int cmd_split(const SplitArgs& a, std::ostream& out, std::ostream& err) {
  const std::string bytes = read_file(a.pairs);
  std::istringstream in(bytes);
  auto pairs = data::load_pairs(in);

  data::SplitManifest manifest;
  manifest.seed = a.seed;
  manifest.test_vocab_fraction = a.test_fraction;
  manifest.unlabeled_fraction = a.unlabeled_fraction;
  manifest.validation_fraction = a.validation_fraction;
  manifest.stratified = !a.no_stratify;
  manifest.source_hash = to_hex(fnv1a64(bytes));
  manifest.input_pairs = pairs.size();
  if (!a.embeddings.empty()) {
    std::ifstream emb(a.embeddings);
    if (!emb) throw std::runtime_error("cannot open '" + a.embeddings + "'");
    const auto load = data::load_embeddings(emb);
    if (load.duplicates > 0) {
      err << "warning: " << a.embeddings << ": " << load.duplicates << " duplicate words, first vectors kept\n";
    }
    auto filtered = data::filter_to_vocabulary(pairs, load.table);
    manifest.dropped_oov = filtered.dropped;
    pairs = std::move(filtered.kept);
  }
  const auto lex = data::lexical_split(pairs, a.test_fraction, derive_seed(a.seed, "lexical"));
  manifest.discarded_mixed = lex.discarded;
  auto bundle = data::partition_train(lex.train, a.unlabeled_fraction, a.validation_fraction,
                                      derive_seed(a.seed, "partition"), !a.no_stratify);
  bundle.test = lex.test;
  data::write_split(a.out, bundle, manifest);
  out << "split: labeled " << bundle.train.size() << ", validation " << bundle.validation.size()
      << ", unlabeled " << bundle.unlabeled.size() << ", test " << bundle.test.size() << " (discarded "
      << lex.discarded << ", oov " << manifest.dropped_oov << ")\n";
  return kExitOk;
}

// ---- gen-dataset ----

struct GenArgs {
  std::string taxonomy;
  std::string out;
  std::uint64_t seed = 0;
  taxonomy::SampleSpec spec;
  std::string distance_mode = "via_lca";
  bool strict = false;
};

int cmd_gen_dataset(GenArgs a, std::ostream& out, std::ostream& err) {
  const std::string bytes = read_file(a.taxonomy);
  std::istringstream in(bytes);
  const auto graph = taxonomy::load_taxonomy(in);
  a.spec.seed = a.seed;
  a.spec.distance_mode =
      a.distance_mode == "undirected" ? taxonomy::DistanceMode::undirected : taxonomy::DistanceMode::via_lca;
  const auto result = taxonomy::sample_pairs(graph, a.spec);

  const std::string pair_bytes = data::serialize_pairs(result.pairs);
  write_file(a.out, pair_bytes);

  json m;
  m["format"] = "relmtl-dataset";
  m["version"] = 1;
  m["taxonomy_hash"] = to_hex(fnv1a64(bytes));
  m["seed"] = a.seed;
  m["requested"] = {{"hypernym", a.spec.hypernym},
                    {"synonym", a.spec.synonym},
                    {"cohyponym", a.spec.cohyponym},
                    {"random", a.spec.random}};
  m["min_random_distance"] = a.spec.min_random_distance;
  m["distance_mode"] = a.distance_mode;
  std::map<std::string, std::size_t> produced;
  for (const auto& p : result.pairs) ++produced[std::string(data::to_string(p.label))];
  m["produced"] = produced;
  m["shortfalls"] = json::array();
  for (const auto& s : result.shortfalls) {
    m["shortfalls"].push_back(
        {{"relation", data::to_string(s.relation)}, {"requested", s.requested}, {"produced", s.produced}});
  }
  m["pairs_hash"] = to_hex(fnv1a64(pair_bytes));
  write_file(a.out + ".manifest.json", m.dump(2) + "\n");

  out << "gen-dataset: " << result.pairs.size() << " pairs written to " << a.out << '\n';
  for (const auto& s : result.shortfalls) {
    err << "shortfall: " << data::to_string(s.relation) << " produced " << s.produced << " of " << s.requested
        << '\n';
  }
  return a.strict && !result.complete() ? kExitShortfall : kExitOk;
}

// ---- train / self-train ----

struct NeuralArgs {
  std::string split;
  std::string embeddings;
  std::string tasks;
  std::string out;
  std::uint64_t seed = 0;
  std::string hidden = "50,50";
  std::size_t batch_size = 32;
  std::size_t epochs = 200;
  std::size_t patience = 10;
  double learning_rate = 0.001;
  // self-train only
  std::optional<std::size_t> n_per_iteration;
  std::size_t max_iterations = 1000;
  std::string retrain_mode = "warm_start";
  std::size_t retrain_epochs = 20;
  std::string log;
};

KeyValueConfig as_config(const NeuralArgs& a, bool self_train) {
  KeyValueConfig kv;
  kv.set("tasks", a.tasks);
  kv.set("hidden", a.hidden);
  kv.set("batch_size", std::to_string(a.batch_size));
  kv.set("epochs", std::to_string(a.epochs));
  kv.set("patience", std::to_string(a.patience));
  kv.set("learning_rate", text::format_double(a.learning_rate));
  kv.set("seeds", std::to_string(a.seed));
  if (self_train) {
    if (a.n_per_iteration) kv.set("self_learn_n", std::to_string(*a.n_per_iteration));
    kv.set("self_learn_max_iterations", std::to_string(a.max_iterations));
    kv.set("retrain_mode", a.retrain_mode);
    kv.set("retrain_epochs", std::to_string(a.retrain_epochs));
  }
  return kv;
}

json validation_summary(const mtl::MultiTaskModel& model, std::span<const PreparedTask> tasks) {
  json v = json::object();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto e = mtl::evaluate(model, i, tasks[i].validation_x, tasks[i].validation_y);
    v[tasks[i].task.name()] = {{"accuracy", e.accuracy}, {"loss", e.loss}};
  }
  return v;
}

int cmd_train(const NeuralArgs& a, bool self_train, std::ostream& out) {
  const auto cfg = ExperimentConfig::from(as_config(a, self_train));
  const auto tasks = load_prepared_tasks(a.split, a.embeddings, cfg.tasks);
  const NeuralOptions opts{cfg.hidden, cfg.train, cfg.self_learn, cfg.retrain_epochs};

  json summary;
  summary["record"] = self_train ? "self_train" : "train";
  summary["config_hash"] = cfg.config_hash;
  summary["seed"] = a.seed;
  std::ostringstream ckpt;
  if (self_train) {
    const auto res = self_train_network(tasks, opts, a.seed);
    mtl::save_checkpoint(ckpt, res.model, cfg.train);
    summary["iterations"] = res.state.t;
    summary["best_iteration"] = res.state.best_iteration;
    summary["stopped_reason"] = selflearn::to_string(res.state.stop_reason);
    summary["pseudo_label_noise"] = res.pseudo_label_noise;
    summary["validation"] = validation_summary(res.model, tasks);
    if (!a.log.empty()) {
      std::ostringstream log;
      selflearn::write_log(log, res.state.history);
      write_file(a.log, log.str());
    }
  } else {
    const auto res = train_network(tasks, opts, a.seed);
    mtl::save_checkpoint(ckpt, res.model, cfg.train);
    summary["epochs_run"] = res.history.epochs.size();
    summary["best_epoch"] = res.history.best_epoch;
    summary["stopped_early"] = res.history.stopped_early;
    summary["validation"] = validation_summary(res.model, tasks);
  }
  write_file(a.out, ckpt.str());
  write_file(a.out + ".json", summary.dump() + "\n");
  out << summary.dump() << '\n';
  return kExitOk;
}

// ---- run ----

struct RunArgs {
  std::string config;
  std::string out = "results.jsonl";
  std::string timings;
  std::string audit;
  std::optional<bool> parallel;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  auto kv = KeyValueConfig::load(a.config);
  if (a.parallel) kv.set("parallel_cells", *a.parallel ? "true" : "false");
  // Relative data paths resolve against the config file's directory.
  const auto base = fs::path(a.config).parent_path();
  for (const char* key : {"split_dir", "embeddings"}) {
    if (auto v = kv.get(key); v && !v->empty() && fs::path(*v).is_relative()) {
      kv.set(key, (base / *v).lexically_normal().string());
    }
  }
  const auto cfg = ExperimentConfig::from(kv);
  const auto run = run_experiment(cfg);

  std::ostringstream results;
  write_results(results, run);
  write_file(a.out, results.str());
  const std::string timings_path = a.timings.empty() ? a.out + ".timings.jsonl" : a.timings;
  std::string timings;
  for (const auto& t : run.timings) timings += t + "\n";
  write_file(timings_path, timings);
  if (!a.audit.empty()) {
    std::string audit;
    for (const auto& e : run.audit.events()) audit += e + "\n";
    write_file(a.audit, audit);
  }
  out << "run: " << run.results.size() << " result records written to " << a.out << '\n';
  return kExitOk;
}

// ---- report ----

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string format = "text";
  std::string out;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<ResultRecord> records;
  for (const auto& path : a.inputs) {
    std::istringstream in(read_file(path));
    try {
      auto more = read_records(in);
      records.insert(records.end(), more.begin(), more.end());
    } catch (const FormatError& e) {
      throw FormatError(path + ": " + e.what());
    }
  }
  const auto table = build_report(std::move(records));
  std::string rendered;
  if (a.format == "text" || a.format == "both") rendered += render_text(table);
  if (a.format == "jsonl" || a.format == "both") rendered += render_jsonl(table);
  if (a.out.empty()) {
    out << rendered;
  } else {
    write_file(a.out, rendered);
  }
  return kExitOk;
}

void add_neural_flags(CLI::App* cmd, NeuralArgs& a, bool self_train) {
  cmd->add_option("--split", a.split, "Split directory (from `split`)")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--embeddings", a.embeddings, "Embedding text file")->required()->check(CLI::ExistingFile)
      ->envname("RELMTL_EMBEDDINGS");
  cmd->add_option("--tasks", a.tasks, "Comma-separated relations, e.g. hypernym,cohyponym")->required();
  cmd->add_option("--out", a.out, "Checkpoint path; a .json summary is written next to it")->required();
  cmd->add_option("--seed", a.seed, "Master seed")->required();
  cmd->add_option("--hidden", a.hidden, "Hidden layer widths")->capture_default_str();
  cmd->add_option("--batch-size", a.batch_size)->capture_default_str();
  cmd->add_option("--epochs", a.epochs)->capture_default_str();
  cmd->add_option("--patience", a.patience)->capture_default_str();
  cmd->add_option("--learning-rate", a.learning_rate)->capture_default_str();
  if (self_train) {
    cmd->add_option("--n", a.n_per_iteration, "Pseudo-labels per task and iteration (default max(32, 5% of U))");
    cmd->add_option("--max-iterations", a.max_iterations)->capture_default_str();
    cmd->add_option("--retrain-mode", a.retrain_mode)
        ->check(CLI::IsMember({"warm_start", "from_scratch"}))
        ->capture_default_str();
    cmd->add_option("--retrain-epochs", a.retrain_epochs)->capture_default_str();
    cmd->add_option("--log", a.log, "Iteration log (JSON lines)");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"relmtl: semantic relation classification with multi-task and self-learning"};
  app.name("relmtl");
  app.require_subcommand(1);

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "Lexical split and L/V/U partition of a pair file");
  split_cmd->add_option("--pairs", split.pairs, "Pair TSV (x, y, label)")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--out", split.out, "Output directory")->required()->envname("RELMTL_SPLIT_DIR");
  split_cmd->add_option("--seed", split.seed)->required();
  split_cmd->add_option("--embeddings", split.embeddings, "Drop pairs with words missing from this table")
      ->check(CLI::ExistingFile);
  split_cmd->add_option("--test-fraction", split.test_fraction, "Share of the vocabulary held out")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  split_cmd->add_option("--unlabeled-fraction", split.unlabeled_fraction)
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  split_cmd->add_option("--validation-fraction", split.validation_fraction)
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  split_cmd->add_flag("--no-stratify", split.no_stratify);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Sample relation pairs from a taxonomy");
  gen_cmd->add_option("--taxonomy", gen.taxonomy)->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Pair TSV; a .manifest.json is written next to it")->required();
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_option("--hypernym", gen.spec.hypernym)->capture_default_str();
  gen_cmd->add_option("--synonym", gen.spec.synonym)->capture_default_str();
  gen_cmd->add_option("--cohyponym", gen.spec.cohyponym)->capture_default_str();
  gen_cmd->add_option("--random", gen.spec.random)->capture_default_str();
  gen_cmd->add_option("--min-random-distance", gen.spec.min_random_distance)->capture_default_str();
  gen_cmd->add_option("--distance-mode", gen.distance_mode)
      ->check(CLI::IsMember({"via_lca", "undirected"}))->capture_default_str();
  gen_cmd->add_flag("--strict", gen.strict, "Exit with status 5 if a relation comes up short");

  NeuralArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a single- or multi-task network");
  add_neural_flags(train_cmd, train, false);

  NeuralArgs self;
  auto* self_cmd = app.add_subcommand("self-train", "Train with stratified self-learning");
  add_neural_flags(self_cmd, self, true);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment grid from a config file");
  run_cmd->add_option("config", run.config, "Experiment config")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Results file")->capture_default_str();
  run_cmd->add_option("--timings", run.timings, "Timing records (default: <out>.timings.jsonl)");
  run_cmd->add_option("--audit", run.audit, "Data load-order log");
  run_cmd->add_option("--parallel", run.parallel, "Run cells in parallel (true/false)");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Comparison table from result files");
  report_cmd->add_option("inputs", report.inputs, "Result files")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--format", report.format)
      ->check(CLI::IsMember({"text", "jsonl", "both"}))->capture_default_str();
  report_cmd->add_option("--out", report.out, "Write here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (split_cmd->parsed()) return cmd_split(split, out, err);
    if (gen_cmd->parsed()) return cmd_gen_dataset(gen, out, err);
    if (train_cmd->parsed()) return cmd_train(train, false, out);
    if (self_cmd->parsed()) return cmd_train(self, true, out);
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (report_cmd->parsed()) return cmd_report(report, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const OutOfVocabulary& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const MergeError& e) {
    err << "merge error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace relmtl::cli
