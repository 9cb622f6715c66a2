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

#include "relmtl/pairs.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "relmtl/embeddings.hpp"
#include "relmtl/error.hpp"
#include "relmtl/text_io.hpp"

namespace relmtl::data {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::cohyponym:
      return "cohyponym";
    case Relation::hypernym:
      return "hypernym";
    case Relation::synonym:
      return "synonym";
    case Relation::meronym:
      return "meronym";
    case Relation::random:
      return "random";
  }
  return "random";
}

std::optional<Relation> parse_relation(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "cohyponym" || t == "cohypo" || t == "coord" || t == "co-hyponym") return Relation::cohyponym;
  if (t == "hypernym" || t == "hyper" || t == "hyp") return Relation::hypernym;
  if (t == "synonym" || t == "syn") return Relation::synonym;
  if (t == "meronym" || t == "mero") return Relation::meronym;
  if (t == "random" || t.rfind("random-", 0) == 0) return Relation::random;
  return std::nullopt;
}

std::vector<WordPair> load_pairs(std::istream& in) {
  std::vector<WordPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (text::trim(body).empty() || body.front() == '#') continue;
    const auto cols = text::split_on(body, '\t');
    if (cols.size() != 3) {
      throw FormatError("expected 3 tab-separated columns, found " + std::to_string(cols.size()), line_no);
    }
    if (cols[0].empty() || cols[1].empty()) throw FormatError("empty word", line_no);
    if (cols[0] == cols[1]) throw FormatError("pair words must differ ('" + std::string(cols[0]) + "')", line_no);
    const auto rel = parse_relation(cols[2]);
    if (!rel) throw FormatError("unknown relation label '" + std::string(cols[2]) + "'", line_no);
    pairs.push_back({std::string(cols[0]), std::string(cols[1]), *rel});
  }
  return pairs;
}

void save_pairs(std::ostream& out, std::span<const WordPair> pairs) {
  for (const auto& p : pairs) out << p.x << '\t' << p.y << '\t' << to_string(p.label) << '\n';
}

std::vector<WordPair> load_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pair file '" + path + "'");
  try {
    return load_pairs(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_pairs_file(const std::string& path, std::span<const WordPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write pair file '" + path + "'");
  save_pairs(out, pairs);
}

std::vector<std::string> vocabulary(std::span<const WordPair> pairs) {
  std::set<std::string> words;
  for (const auto& p : pairs) {
    words.insert(p.x);
    words.insert(p.y);
  }
  return {words.begin(), words.end()};
}

VocabularyFilter filter_to_vocabulary(std::span<const WordPair> pairs, const EmbeddingTable& table) {
  VocabularyFilter out;
  for (const auto& p : pairs) {
    if (table.contains(p.x) && table.contains(p.y)) {
      out.kept.push_back(p);
    } else {
      ++out.dropped;
    }
  }
  return out;
}

std::vector<WordPair> task_pairs(std::span<const WordPair> pairs, const RelationTask& task) {
  std::vector<WordPair> out;
  std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
               [&](const WordPair& p) { return task.covers(p.label); });
  return out;
}

std::vector<std::size_t> task_labels(std::span<const WordPair> pairs, const RelationTask& task) {
  std::vector<std::size_t> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!task.covers(p.label)) {
      throw std::invalid_argument("task_labels: pair label '" + std::string(to_string(p.label)) +
                                  "' is not part of task " + task.name());
    }
    out.push_back(task.class_of(p.label));
  }
  return out;
}

}  // namespace relmtl::data
