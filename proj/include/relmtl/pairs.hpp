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

#ifndef RELMTL_PAIRS_HPP_
#define RELMTL_PAIRS_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relmtl::data {

class EmbeddingTable;

enum class Relation { cohyponym, hypernym, synonym, meronym, random };

inline constexpr Relation kAllRelations[] = {Relation::cohyponym, Relation::hypernym, Relation::synonym,
                                            Relation::meronym, Relation::random};

std::string_view to_string(Relation r);

/// Canonical names plus the tags used by the public datasets
/// (hyper, coord, mero, syn, random-n, ...). Empty if unknown.
std::optional<Relation> parse_relation(std::string_view s);

struct WordPair {
  std::string x;
  std::string y;
  Relation label = Relation::random;

  bool operator==(const WordPair&) const = default;
};

/// Pair file: UTF-8, one `x<TAB>y<TAB>label` per line, '#' starts a comment
/// line, blank lines ignored. Throws FormatError with the line number on a
/// wrong column count, unknown label, empty word, or x == y.
std::vector<WordPair> load_pairs(std::istream& in);
void save_pairs(std::ostream& out, std::span<const WordPair> pairs);

std::vector<WordPair> load_pairs_file(const std::string& path);
void save_pairs_file(const std::string& path, std::span<const WordPair> pairs);

/// Sorted distinct words of the pairs.
std::vector<std::string> vocabulary(std::span<const WordPair> pairs);

struct VocabularyFilter {
  std::vector<WordPair> kept;
  std::size_t dropped = 0;
};

/// Drops pairs with a word missing from the embedding table.
VocabularyFilter filter_to_vocabulary(std::span<const WordPair> pairs, const EmbeddingTable& table);

/// A binary "relation vs random" task. Class 0 is the relation, class 1 random.
struct RelationTask {
  Relation relation = Relation::hypernym;

  std::string name() const { return std::string(to_string(relation)); }
  bool covers(Relation r) const { return r == relation || r == Relation::random; }
  std::size_t class_of(Relation r) const { return r == relation ? 0 : 1; }
  static constexpr std::size_t kClasses = 2;
};

/// Pairs whose label is the task's relation or random, in input order.
std::vector<WordPair> task_pairs(std::span<const WordPair> pairs, const RelationTask& task);
std::vector<std::size_t> task_labels(std::span<const WordPair> pairs, const RelationTask& task);

}  // namespace relmtl::data

#endif  // RELMTL_PAIRS_HPP_
