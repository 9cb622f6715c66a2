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

#ifndef RELMTL_SPLIT_IO_HPP_
#define RELMTL_SPLIT_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "relmtl/splits.hpp"

// On-disk split directory:
//
//   labeled.tsv      L (pair TSV)
//   validation.tsv   V
//   unlabeled.tsv    U, with its gold labels (sealed on load)
//   test.tsv         lexically disjoint test set
//   manifest.json    seed, fractions, counts and an FNV-1a hash per part
//
// Parts are loaded one at a time and checked against the manifest hash.
namespace relmtl::data {

enum class SplitPart { labeled, validation, unlabeled, test };

std::string_view file_name(SplitPart part);
std::string_view to_string(SplitPart part);

struct SplitManifest {
  std::uint64_t seed = 0;
  double test_vocab_fraction = 0.4;
  double unlabeled_fraction = 0.6;
  double validation_fraction = 0.3;
  bool stratified = true;
  std::string source_hash;          // hash of the input pair file bytes
  std::size_t input_pairs = 0;
  std::size_t dropped_oov = 0;      // removed before splitting (no embedding)
  std::size_t discarded_mixed = 0;  // lexical split discards
  std::map<std::string, std::size_t> counts;
  std::map<std::string, std::string> hashes;

  std::string to_json() const;
  static SplitManifest from_json(std::string_view text);
};

/// Serialized bytes of a part, as written to disk.
std::string serialize_pairs(std::span<const WordPair> pairs);

/// Writes the four part files and manifest.json into `dir` (created if
/// needed); fills counts/hashes of `manifest`.
void write_split(const std::string& dir, const SplitBundle& bundle, SplitManifest& manifest);

SplitManifest read_manifest(const std::string& dir);

/// Loads one part and verifies its hash. Throws FormatError on mismatch.
std::vector<WordPair> read_split_part(const std::string& dir, SplitPart part, const SplitManifest& manifest);

}  // namespace relmtl::data

#endif  // RELMTL_SPLIT_IO_HPP_
