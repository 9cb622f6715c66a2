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

#include "relmtl/embeddings.hpp"

#include <algorithm>
#include <istream>

#include "relmtl/error.hpp"
#include "relmtl/pairs.hpp"
#include "relmtl/text_io.hpp"

namespace relmtl::data {

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(values_.data() + it->second * dimension_, dimension_);
}

bool EmbeddingTable::insert(std::string word, std::span<const double> vector) {
  if (vector.size() != dimension_) {
    throw std::invalid_argument("EmbeddingTable::insert: vector has dimension " + std::to_string(vector.size()) +
                                ", table has " + std::to_string(dimension_));
  }
  if (index_.count(word) != 0) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  values_.insert(values_.end(), vector.begin(), vector.end());
  return true;
}

EmbeddingLoad load_embeddings(std::istream& in) {
  EmbeddingLoad result;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> dim;
  std::vector<double> vec;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = text::split_ws(text::chomp(line));
    if (fields.empty()) continue;
    const std::size_t d = fields.size() - 1;
    if (d == 0) throw FormatError("embedding line has a word but no values", line_no);
    if (!dim) {
      dim = d;
      result.table = EmbeddingTable(d);
    } else if (d != *dim) {
      throw FormatError("expected " + std::to_string(*dim) + " values, found " + std::to_string(d), line_no);
    }
    vec.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      auto v = text::parse_double(fields[k + 1]);
      if (!v) throw FormatError("non-numeric value '" + std::string(fields[k + 1]) + "'", line_no);
      vec[k] = *v;
    }
    if (!result.table.insert(std::string(fields[0]), vec)) ++result.duplicates;
  }
  return result;
}

std::vector<double> encode_pair(const EmbeddingTable& table, const WordPair& pair) {
  const auto x = table.find(pair.x);
  if (!x) throw OutOfVocabulary(pair.x);
  const auto y = table.find(pair.y);
  if (!y) throw OutOfVocabulary(pair.y);
  std::vector<double> out;
  out.reserve(2 * table.dimension());
  out.insert(out.end(), x->begin(), x->end());
  out.insert(out.end(), y->begin(), y->end());
  return out;
}

Matrix encode_pairs(const EmbeddingTable& table, std::span<const WordPair> pairs) {
  Matrix out(pairs.size(), 2 * table.dimension());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto v = encode_pair(table, pairs[r]);
    std::copy(v.begin(), v.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace relmtl::data
