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

#include <algorithm>
#include <set>
#include <sstream>

#include "relmtl/embeddings.hpp"
#include "relmtl/error.hpp"
#include "relmtl/pairs.hpp"
#include "relmtl/split_io.hpp"
#include "relmtl/splits.hpp"
#include "support/synthetic.hpp"

using namespace relmtl;
using data::Relation;
using data::WordPair;

TEST_CASE("load_embeddings: minimal file") {
  std::istringstream in("a 1.0 2.0\nb 3.0 4.0\n");
  const auto load = data::load_embeddings(in);
  CHECK(load.table.dimension() == 2);
  CHECK(load.table.size() == 2);
  CHECK(load.duplicates == 0);
  const auto b = load.table.find("b");
  REQUIRE(b.has_value());
  CHECK((*b)[1] == 4.0);
  CHECK(!load.table.find("c").has_value());
}

TEST_CASE("load_embeddings: dimension mismatch names the line") {
  std::ostringstream text;
  text << "first";
  for (int i = 0; i < 300; ++i) text << " 0.5";
  text << "\nsecond";
  for (int i = 0; i < 299; ++i) text << " 0.5";
  text << "\n";
  std::istringstream in(text.str());
  try {
    data::load_embeddings(in);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream junk("a 1.0 zz\n");
  CHECK_THROWS_AS(data::load_embeddings(junk), FormatError);
}

TEST_CASE("load_embeddings: duplicates keep the first vector") {
  std::istringstream in("a 1 2\nb 3 4\na 5 6\n");
  const auto load = data::load_embeddings(in);
  CHECK(load.table.size() == 2);
  CHECK(load.duplicates == 1);
  CHECK((*load.table.find("a"))[0] == 1.0);
}

TEST_CASE("encode_pair concatenates in order") {
  data::EmbeddingTable t(2);
  const std::vector<double> x{1, 2}, y{3, 4};
  t.insert("x", x);
  t.insert("y", y);
  CHECK(data::encode_pair(t, {"x", "y", Relation::hypernym}) == std::vector<double>{1, 2, 3, 4});
  CHECK(data::encode_pair(t, {"x", "y", Relation::hypernym}) != data::encode_pair(t, {"y", "x", Relation::hypernym}));
  try {
    data::encode_pair(t, {"x", "zebra", Relation::random});
    FAIL("expected OutOfVocabulary");
  } catch (const OutOfVocabulary& e) {
    CHECK(e.word() == "zebra");
  }
  const std::vector<WordPair> pairs{{"x", "y", Relation::random}, {"y", "x", Relation::random}};
  const auto m = data::encode_pairs(t, pairs);
  CHECK(m == Matrix::from_rows({{1, 2, 3, 4}, {3, 4, 1, 2}}));
}

TEST_CASE("pair file parsing") {
  std::istringstream in("# header\nbike\ttandem\thypernym\n\nbike\tscooter\tcoord\n");
  const auto pairs = data::load_pairs(in);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == WordPair{"bike", "tandem", Relation::hypernym});
  CHECK(pairs[1].label == Relation::cohyponym);

  std::istringstream two("bike\ttandem\n");
  try {
    data::load_pairs(two);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 1);
  }
  std::istringstream label("a\tb\thyper\nc\td\tfriendship\n");
  try {
    data::load_pairs(label);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream self("a\ta\trandom\n");
  CHECK_THROWS_AS(data::load_pairs(self), FormatError);
}

TEST_CASE("pair file save/load round trip") {
  Rng rng(8);
  const Relation rels[] = {Relation::cohyponym, Relation::hypernym, Relation::synonym, Relation::meronym,
                           Relation::random};
  std::vector<WordPair> pairs;
  for (int i = 0; i < 1000; ++i) {
    const auto a = rng.index(500);
    auto b = rng.index(500);
    if (b == a) b = (b + 1) % 500;
    pairs.push_back({"w" + std::to_string(a), "v_" + std::to_string(b), rels[rng.index(5)]});
  }
  std::stringstream s;
  data::save_pairs(s, pairs);
  CHECK(data::load_pairs(s) == pairs);
}

TEST_CASE("relation names and tasks") {
  CHECK(data::parse_relation("hyper") == Relation::hypernym);
  CHECK(data::parse_relation("coord") == Relation::cohyponym);
  CHECK(data::parse_relation("mero") == Relation::meronym);
  CHECK(data::parse_relation("random-n") == Relation::random);
  CHECK(!data::parse_relation("antonym").has_value());

  const std::vector<WordPair> pairs{{"a", "b", Relation::hypernym},
                                    {"a", "c", Relation::cohyponym},
                                    {"b", "c", Relation::random}};
  const data::RelationTask task{Relation::hypernym};
  const auto sub = data::task_pairs(pairs, task);
  CHECK(sub.size() == 2);
  CHECK(data::task_labels(sub, task) == std::vector<std::size_t>{0, 1});
  CHECK(data::vocabulary(pairs) == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("lexical_split: block-diagonal case") {
  const std::vector<WordPair> pairs{{"a", "b", Relation::hypernym}, {"c", "d", Relation::random}};
  bool found = false;
  for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
    const auto probe = [&] {
      try {
        return std::optional(data::lexical_split(pairs, 0.5, seed));
      } catch (const EmptySplitError&) {
        return std::optional<data::LexicalSplit>();
      }
    }();
    if (probe && probe->train == std::vector<WordPair>{pairs[0]}) {
      CHECK(probe->test == std::vector<WordPair>{pairs[1]});
      CHECK(probe->discarded == 0);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("lexical_split: a lone mixed pair is an error") {
  const std::vector<WordPair> pairs{{"a", "c", Relation::hypernym}};
  CHECK_THROWS_AS(data::lexical_split(pairs, 0.5, 1), EmptySplitError);
}

TEST_CASE("lexical_split: disjoint vocabularies") {
  const auto corpus = testing::make_corpus({});
  const auto split = data::lexical_split(corpus.pairs, 0.4, 3);
  const auto train_vocab = data::vocabulary(split.train);
  const auto test_vocab = data::vocabulary(split.test);
  std::vector<std::string> both;
  std::set_intersection(train_vocab.begin(), train_vocab.end(), test_vocab.begin(), test_vocab.end(),
                        std::back_inserter(both));
  CHECK(both.empty());
  CHECK(split.train.size() + split.test.size() + split.discarded == corpus.pairs.size());
}

TEST_CASE("partition_counts arithmetic") {
  const auto c = data::partition_counts(100, 0.6, 0.3);
  CHECK(c.unlabeled == 60);
  CHECK(c.validation == 12);
  CHECK(c.labeled == 28);
}

namespace {

std::vector<WordPair> labelled(std::size_t n, Relation r, const std::string& prefix) {
  std::vector<WordPair> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({prefix + std::to_string(i), prefix + "y" + std::to_string(i), r});
  return out;
}

std::size_t count(const std::vector<WordPair>& v, Relation r) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [r](const WordPair& p) { return p.label == r; }));
}

}  // namespace

TEST_CASE("partition_train: one class gives 60/12/28") {
  const auto pairs = labelled(100, Relation::hypernym, "h");
  const auto b = data::partition_train(pairs, 0.6, 0.3, 1);
  CHECK(b.unlabeled.size() == 60);
  CHECK(b.validation.size() == 12);
  CHECK(b.train.size() == 28);
}

TEST_CASE("partition_train: stratified, exact partition") {
  auto pairs = labelled(10, Relation::hypernym, "h");
  const auto rnd = labelled(10, Relation::random, "r");
  pairs.insert(pairs.end(), rnd.begin(), rnd.end());
  const auto b = data::partition_train(pairs, 0.6, 0.3, 2);
  const auto diff = [](std::size_t a, std::size_t c) { return a > c ? a - c : c - a; };
  CHECK(diff(count(b.train, Relation::hypernym), count(b.train, Relation::random)) <= 1);
  CHECK(diff(count(b.validation, Relation::hypernym), count(b.validation, Relation::random)) <= 1);
  CHECK(diff(count(b.unlabeled.audit(), Relation::hypernym), count(b.unlabeled.audit(), Relation::random)) <= 1);

  std::vector<WordPair> all = b.train;
  all.insert(all.end(), b.validation.begin(), b.validation.end());
  all.insert(all.end(), b.unlabeled.audit().begin(), b.unlabeled.audit().end());
  const auto key = [](const WordPair& p) { return p.x + "|" + p.y; };
  std::set<std::string> got, want;
  for (const auto& p : all) got.insert(key(p));
  for (const auto& p : pairs) want.insert(key(p));
  CHECK(all.size() == pairs.size());
  CHECK(got == want);
}

TEST_CASE("partition_train: tiny classes are named") {
  auto pairs = labelled(10, Relation::hypernym, "h");
  const auto rnd = labelled(2, Relation::random, "r");
  pairs.insert(pairs.end(), rnd.begin(), rnd.end());
  try {
    data::partition_train(pairs, 0.6, 0.3, 2);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("random") != std::string::npos);
  }
  CHECK_NOTHROW(data::partition_train(pairs, 0.6, 0.3, 2, false));
}

TEST_CASE("split directory round trip and hash check") {
  testing::TempDir dir("split_io");
  auto pairs = labelled(30, Relation::hypernym, "h");
  const auto rnd = labelled(30, Relation::random, "r");
  pairs.insert(pairs.end(), rnd.begin(), rnd.end());
  auto bundle = data::partition_train(pairs, 0.6, 0.3, 5);
  bundle.test = labelled(7, Relation::random, "t");
  data::SplitManifest manifest;
  manifest.seed = 5;
  data::write_split(dir.str(), bundle, manifest);

  const auto read = data::read_manifest(dir.str());
  CHECK(read.counts.at("labeled") == bundle.train.size());
  CHECK(data::read_split_part(dir.str(), data::SplitPart::labeled, read) == bundle.train);
  CHECK(data::read_split_part(dir.str(), data::SplitPart::unlabeled, read) == bundle.unlabeled.audit());
  CHECK(data::read_split_part(dir.str(), data::SplitPart::test, read) == bundle.test);

  testing::write_text(dir / "test.tsv", "t0\ttx\trandom\n");
  CHECK_THROWS_AS(data::read_split_part(dir.str(), data::SplitPart::test, read), FormatError);
}
