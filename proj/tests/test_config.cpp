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

#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "relmtl/config.hpp"
#include "relmtl/error.hpp"
#include "support/experiment_fixture.hpp"

using namespace relmtl;
using cli::ExperimentConfig;
using cli::KeyValueConfig;
using cli::Regime;

TEST_CASE("key-value parsing, comments and overrides") {
  std::istringstream in("# comment\n epochs = 20 \n\nepochs=30\nhidden = 8, 4\n");
  const auto kv = KeyValueConfig::parse(in);
  CHECK(kv.get("epochs") == "30");
  CHECK(kv.get("hidden") == "8, 4");
  CHECK(!kv.get("patience").has_value());
  std::istringstream bad("no equals sign here\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(bad), ConfigError);
}

TEST_CASE("include directive and cycles") {
  testing::TempDir dir("config_include");
  testing::write_text(dir / "shared.cfg", "epochs = 50\npatience = 4\n");
  testing::write_text(dir / "main.cfg", "epochs = 10\ninclude shared.cfg\npatience = 7\n");
  const auto kv = KeyValueConfig::load(dir / "main.cfg");
  CHECK(kv.get("epochs") == "50");
  CHECK(kv.get("patience") == "7");

  testing::write_text(dir / "a.cfg", "include b.cfg\n");
  testing::write_text(dir / "b.cfg", "include a.cfg\n");
  CHECK_THROWS_AS(KeyValueConfig::load(dir / "a.cfg"), ConfigError);
  CHECK_THROWS(KeyValueConfig::load(dir / "missing.cfg"));
}

TEST_CASE("ExperimentConfig fields and errors") {
  KeyValueConfig kv;
  kv.set("tasks", "hypernym, cohyponym");
  kv.set("regimes", "baseline_majority,multitask");
  kv.set("seeds", "1,2,3");
  kv.set("hidden", "16");
  kv.set("epochs", "5");
  kv.set("learning_rate", "0.01");
  kv.set("retrain_mode", "from_scratch");
  kv.set("logreg_lambda", "0.5");
  const auto c = ExperimentConfig::from(kv);
  CHECK(c.tasks.size() == 2);
  CHECK(c.regimes == std::vector<Regime>{Regime::baseline_majority, Regime::multitask});
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(c.hidden == std::vector<std::size_t>{16});
  CHECK(c.train.epochs == 5);
  CHECK(c.train.learning_rate == 0.01);
  CHECK(c.self_learn.retrain_mode == selflearn::RetrainMode::from_scratch);
  CHECK(c.logreg.l2_lambda == 0.5);
  CHECK(c.config_hash.size() == 16);

  auto unknown = kv;
  unknown.set("epoch", "5");
  CHECK_THROWS_AS(ExperimentConfig::from(unknown), ConfigError);
  auto bad_num = kv;
  bad_num.set("epochs", "five");
  CHECK_THROWS_AS(ExperimentConfig::from(bad_num), ConfigError);
  auto bad_task = kv;
  bad_task.set("tasks", "random");
  CHECK_THROWS_AS(ExperimentConfig::from(bad_task), ConfigError);
  auto bad_regime = kv;
  bad_regime.set("regimes", "ensemble");
  CHECK_THROWS_AS(ExperimentConfig::from(bad_regime), ConfigError);
}

TEST_CASE("config hash ignores paths and scheduling") {
  KeyValueConfig a;
  a.set("tasks", "hypernym");
  a.set("seeds", "1");
  auto b = a;
  b.set("split_dir", "/elsewhere");
  b.set("parallel_cells", "false");
  CHECK(ExperimentConfig::from(a).config_hash == ExperimentConfig::from(b).config_hash);
  b.set("epochs", "3");
  CHECK(ExperimentConfig::from(a).config_hash != ExperimentConfig::from(b).config_hash);
}

TEST_CASE("validate: regime/task compatibility and files") {
  testing::ExperimentFixture fx("config_validate");
  KeyValueConfig kv;
  kv.set("split_dir", fx.split_dir);
  kv.set("embeddings", fx.embeddings);
  kv.set("tasks", "hypernym");
  kv.set("regimes", "multitask");
  kv.set("seeds", "1");
  CHECK_THROWS_AS(ExperimentConfig::from(kv).validate(), ConfigError);
  kv.set("regimes", "nn_single,nn_single");
  CHECK_THROWS_AS(ExperimentConfig::from(kv).validate(), ConfigError);
  kv.set("regimes", "nn_single");
  CHECK_NOTHROW(ExperimentConfig::from(kv).validate());
  kv.set("tasks", "hypernym,cohyponym,synonym,meronym");
  CHECK_THROWS_AS(ExperimentConfig::from(kv).validate(), ConfigError);
  kv.set("tasks", "hypernym");
  kv.set("seeds", "");
  CHECK_THROWS_AS(ExperimentConfig::from(kv).validate(), ConfigError);
  kv.set("seeds", "1");
  kv.set("embeddings", fx.dir / "nope.txt");
  CHECK_THROWS_AS(ExperimentConfig::from(kv).validate(), ConfigError);
  kv.set("regimes", "baseline_majority");
  CHECK_NOTHROW(ExperimentConfig::from(kv).validate());
  kv.set("split_dir", fx.dir.str());
  CHECK_THROWS_AS(ExperimentConfig::from(kv).validate(), ConfigError);
}

TEST_CASE("environment overrides apply to paths only") {
  KeyValueConfig kv;
  kv.set("split_dir", "/from/config");
  kv.set("tasks", "hypernym");
  ::setenv("RELMTL_SPLIT_DIR", "/from/env", 1);
  const auto c = ExperimentConfig::from(kv);
  ::unsetenv("RELMTL_SPLIT_DIR");
  CHECK(c.split_dir == "/from/env");
  CHECK(ExperimentConfig::from(kv).split_dir == "/from/config");
}

TEST_CASE("regime names") {
  for (Regime r : cli::kAllRegimes) CHECK(cli::regime_from_string(cli::to_string(r)) == r);
  CHECK(cli::display_name(Regime::baseline_majority) == "Majority Baseline");
  CHECK(cli::is_multitask(Regime::multitask_self_learning));
  CHECK(!cli::is_multitask(Regime::self_learning));
}
