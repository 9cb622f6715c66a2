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

#ifndef RELMTL_EMBEDDINGS_HPP_
#define RELMTL_EMBEDDINGS_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relmtl/matrix.hpp"

namespace relmtl::data {

struct WordPair;

/// Word -> fixed-dimension vector. Vectors live in one flat buffer.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool contains(std::string_view word) const { return index_.count(std::string(word)) != 0; }

  /// Empty optional when the word is absent (never a zero vector).
  std::optional<std::span<const double>> find(std::string_view word) const;

  /// Returns false (and leaves the table unchanged) if the word exists.
  bool insert(std::string word, std::span<const double> vector);

  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> values_;
};

struct EmbeddingLoad {
  EmbeddingTable table;
  std::size_t duplicates = 0;  // later occurrences skipped
};

/// GloVe text format: `word v1 v2 ... vD` per line, D constant.
/// Blank lines are skipped. Throws FormatError naming the line on a
/// dimension change or a non-numeric value.
EmbeddingLoad load_embeddings(std::istream& in);

/// x (+) y: the first D entries are x's vector, the last D are y's.
/// Throws OutOfVocabulary naming the missing word.
std::vector<double> encode_pair(const EmbeddingTable& table, const WordPair& pair);

/// One encoded pair per row.
Matrix encode_pairs(const EmbeddingTable& table, std::span<const WordPair> pairs);

}  // namespace relmtl::data

#endif  // RELMTL_EMBEDDINGS_HPP_
