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

#include "relmtl/split_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relmtl/error.hpp"
#include "relmtl/hash.hpp"

namespace relmtl::data {
namespace fs = std::filesystem;

std::string_view file_name(SplitPart part) {
  switch (part) {
    case SplitPart::labeled:
      return "labeled.tsv";
    case SplitPart::validation:
      return "validation.tsv";
    case SplitPart::unlabeled:
      return "unlabeled.tsv";
    case SplitPart::test:
      return "test.tsv";
  }
  return "";
}

std::string_view to_string(SplitPart part) {
  switch (part) {
    case SplitPart::labeled:
      return "labeled";
    case SplitPart::validation:
      return "validation";
    case SplitPart::unlabeled:
      return "unlabeled";
    case SplitPart::test:
      return "test";
  }
  return "";
}

std::string SplitManifest::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "relmtl-split";
  j["version"] = 1;
  j["seed"] = seed;
  j["test_vocab_fraction"] = test_vocab_fraction;
  j["unlabeled_fraction"] = unlabeled_fraction;
  j["validation_fraction"] = validation_fraction;
  j["stratified"] = stratified;
  j["source_hash"] = source_hash;
  j["input_pairs"] = input_pairs;
  j["dropped_oov"] = dropped_oov;
  j["discarded_mixed"] = discarded_mixed;
  j["counts"] = counts;
  j["hashes"] = hashes;
  return j.dump(2) + "\n";
}

SplitManifest SplitManifest::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "relmtl-split" || j.at("version") != 1) {
      throw FormatError("split manifest: unsupported format or version");
    }
    SplitManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.test_vocab_fraction = j.at("test_vocab_fraction").get<double>();
    m.unlabeled_fraction = j.at("unlabeled_fraction").get<double>();
    m.validation_fraction = j.at("validation_fraction").get<double>();
    m.stratified = j.at("stratified").get<bool>();
    m.source_hash = j.at("source_hash").get<std::string>();
    m.input_pairs = j.at("input_pairs").get<std::size_t>();
    m.dropped_oov = j.at("dropped_oov").get<std::size_t>();
    m.discarded_mixed = j.at("discarded_mixed").get<std::size_t>();
    m.counts = j.at("counts").get<std::map<std::string, std::size_t>>();
    m.hashes = j.at("hashes").get<std::map<std::string, std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("split manifest: ") + e.what());
  }
}

std::string serialize_pairs(std::span<const WordPair> pairs) {
  std::ostringstream out;
  save_pairs(out, pairs);
  return out.str();
}

void write_split(const std::string& dir, const SplitBundle& bundle, SplitManifest& manifest) {
  fs::create_directories(dir);
  const std::pair<SplitPart, std::span<const WordPair>> parts[] = {
      {SplitPart::labeled, bundle.train},
      {SplitPart::validation, bundle.validation},
      {SplitPart::unlabeled, bundle.unlabeled.audit()},
      {SplitPart::test, bundle.test},
  };
  for (const auto& [part, pairs] : parts) {
    const std::string bytes = serialize_pairs(pairs);
    const std::string name(to_string(part));
    manifest.counts[name] = pairs.size();
    manifest.hashes[name] = to_hex(fnv1a64(bytes));
    std::ofstream out(fs::path(dir) / file_name(part), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write split part in '" + dir + "'");
    out << bytes;
  }
  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in '" + dir + "'");
  out << manifest.to_json();
}

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SplitManifest read_manifest(const std::string& dir) {
  return SplitManifest::from_json(slurp(fs::path(dir) / "manifest.json"));
}

std::vector<WordPair> read_split_part(const std::string& dir, SplitPart part, const SplitManifest& manifest) {
  const auto path = fs::path(dir) / file_name(part);
  const std::string bytes = slurp(path);
  const std::string name(to_string(part));
  auto it = manifest.hashes.find(name);
  if (it == manifest.hashes.end() || it->second != to_hex(fnv1a64(bytes))) {
    throw FormatError(path.string() + ": content hash does not match manifest.json");
  }
  std::istringstream in(bytes);
  try {
    return load_pairs(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace relmtl::data
