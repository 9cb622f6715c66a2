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

#ifndef RELMTL_TAXONOMY_HPP_
#define RELMTL_TAXONOMY_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relmtl/pairs.hpp"

namespace relmtl::taxonomy {

using SynsetId = std::size_t;

/// Hypernym DAG with a single root and lemma membership.
///
/// Synsets are numbered in lexicographic order of their string ids, so
/// "smallest id" tie-breaks can compare indices.
class TaxonomyGraph {
 public:
  std::size_t size() const noexcept { return ids_.size(); }
  SynsetId root() const noexcept { return root_; }
  const std::string& id(SynsetId s) const { return ids_.at(s); }
  std::optional<SynsetId> find(std::string_view id) const;

  std::span<const SynsetId> parents(SynsetId s) const { return parents_.at(s); }
  std::span<const SynsetId> children(SynsetId s) const { return children_.at(s); }
  std::span<const std::string> lemmas(SynsetId s) const { return lemmas_.at(s); }
  /// Shortest hypernym path length to the root.
  std::size_t depth(SynsetId s) const { return depth_.at(s); }
  /// Synsets containing `lemma` (ascending); empty if unknown.
  std::span<const SynsetId> synsets_of(std::string_view lemma) const;

  /// Strict ancestors with their shortest upward distance, ascending by id.
  std::vector<std::pair<SynsetId, std::size_t>> ancestors(SynsetId s) const;

  /// Builds and validates a graph. Edges are (child, parent) ids; any id
  /// mentioned in edges or lemmas becomes a node. Throws FormatError on a
  /// cycle (naming a member), zero or several roots.
  static TaxonomyGraph build(std::span<const std::pair<std::string, std::string>> edges,
                             std::span<const std::pair<std::string, std::string>> lemmas);

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, SynsetId> index_;
  std::vector<std::vector<SynsetId>> parents_;
  std::vector<std::vector<SynsetId>> children_;
  std::vector<std::vector<std::string>> lemmas_;
  std::vector<std::size_t> depth_;
  std::unordered_map<std::string, std::vector<SynsetId>> lemma_index_;
  SynsetId root_ = 0;
};

/// Taxonomy export:
///
///   [edges]
///   SYNSET_ID<TAB>PARENT_ID
///   ...
///   [lemmas]
///   SYNSET_ID<TAB>lemma
///   ...
///
/// '#' comment lines and blank lines are ignored.
TaxonomyGraph load_taxonomy(std::istream& in);

enum class DistanceMode {
  via_lca,     // dist(s1, lca) + dist(s2, lca) along hypernym edges
  undirected,  // shortest path ignoring edge direction
};

struct PathDistance {
  std::size_t distance = 0;
  SynsetId lca = 0;

  bool operator==(const PathDistance&) const = default;
};

/// lca is the deepest common ancestor (ties: smallest id). Throws
/// std::invalid_argument for an unknown synset.
PathDistance path_distance(const TaxonomyGraph& graph, SynsetId s1, SynsetId s2,
                           DistanceMode mode = DistanceMode::via_lca);

struct SampleSpec {
  std::size_t hypernym = 0;
  std::size_t synonym = 0;
  std::size_t cohyponym = 0;
  std::size_t random = 0;
  std::size_t min_random_distance = 7;
  DistanceMode distance_mode = DistanceMode::via_lca;
  std::uint64_t seed = 0;
};

struct RelationShortfall {
  data::Relation relation;
  std::size_t requested = 0;
  std::size_t produced = 0;
};

struct SampleResult {
  std::vector<data::WordPair> pairs;
  std::vector<RelationShortfall> shortfalls;  // only relations that came up short

  bool complete() const noexcept { return shortfalls.empty(); }
};

/// Samples noun pairs from the taxonomy.
///
///  - hypernym: (lemma of a synset, lemma of one of its strict ancestors)
///  - synonym: two distinct lemmas of one synset
///  - cohyponym: lemmas of two synsets with a common direct parent that
///    share no synset
///  - random: lemmas of two synsets whose lca is the root and whose
///    distance is at least min_random_distance
///
/// No unordered word pair appears twice in the output. Relations that
/// cannot be filled are reported in `shortfalls`.
SampleResult sample_pairs(const TaxonomyGraph& graph, const SampleSpec& spec);

}  // namespace relmtl::taxonomy

#endif  // RELMTL_TAXONOMY_HPP_
