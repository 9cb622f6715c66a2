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

#include "relmtl/taxonomy.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <set>
#include <stdexcept>

#include "relmtl/error.hpp"
#include "relmtl/rng.hpp"
#include "relmtl/text_io.hpp"

namespace relmtl::taxonomy {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

}  // namespace

std::optional<SynsetId> TaxonomyGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const SynsetId> TaxonomyGraph::synsets_of(std::string_view lemma) const {
  auto it = lemma_index_.find(std::string(lemma));
  if (it == lemma_index_.end()) return {};
  return it->second;
}

std::vector<std::pair<SynsetId, std::size_t>> TaxonomyGraph::ancestors(SynsetId s) const {
  std::unordered_map<SynsetId, std::size_t> dist;
  std::deque<SynsetId> queue{s};
  dist[s] = 0;
  while (!queue.empty()) {
    const SynsetId cur = queue.front();
    queue.pop_front();
    for (SynsetId p : parents_[cur]) {
      if (dist.emplace(p, dist[cur] + 1).second) queue.push_back(p);
    }
  }
  dist.erase(s);
  std::vector<std::pair<SynsetId, std::size_t>> out(dist.begin(), dist.end());
  std::sort(out.begin(), out.end());
  return out;
}

TaxonomyGraph TaxonomyGraph::build(std::span<const std::pair<std::string, std::string>> edges,
                                   std::span<const std::pair<std::string, std::string>> lemmas) {
  std::set<std::string> ids;
  for (const auto& [c, p] : edges) {
    ids.insert(c);
    ids.insert(p);
  }
  for (const auto& [s, l] : lemmas) ids.insert(s);
  if (ids.empty()) throw FormatError("taxonomy: no synsets");

  TaxonomyGraph g;
  g.ids_.assign(ids.begin(), ids.end());
  for (SynsetId k = 0; k < g.ids_.size(); ++k) g.index_.emplace(g.ids_[k], k);
  const std::size_t n = g.ids_.size();
  g.parents_.resize(n);
  g.children_.resize(n);
  g.lemmas_.resize(n);
  for (const auto& [c, p] : edges) {
    const SynsetId ci = g.index_.at(c);
    const SynsetId pi = g.index_.at(p);
    if (ci == pi) throw FormatError("taxonomy: cycle through synset '" + c + "'");
    if (std::find(g.parents_[ci].begin(), g.parents_[ci].end(), pi) == g.parents_[ci].end()) {
      g.parents_[ci].push_back(pi);
      g.children_[pi].push_back(ci);
    }
  }
  for (auto& v : g.parents_) std::sort(v.begin(), v.end());
  for (auto& v : g.children_) std::sort(v.begin(), v.end());
  for (const auto& [s, l] : lemmas) {
    const SynsetId si = g.index_.at(s);
    auto& ls = g.lemmas_[si];
    if (std::find(ls.begin(), ls.end(), l) == ls.end()) {
      ls.push_back(l);
      g.lemma_index_[l].push_back(si);
    }
  }
  for (auto& [l, v] : g.lemma_index_) std::sort(v.begin(), v.end());

  // Cycle check: Kahn's algorithm from the leaves up.
  std::vector<std::size_t> pending(n);
  std::deque<SynsetId> ready;
  for (SynsetId s = 0; s < n; ++s) {
    pending[s] = g.children_[s].size();
    if (pending[s] == 0) ready.push_back(s);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const SynsetId s = ready.front();
    ready.pop_front();
    ++visited;
    for (SynsetId p : g.parents_[s]) {
      if (--pending[p] == 0) ready.push_back(p);
    }
  }
  if (visited != n) {
    for (SynsetId s = 0; s < n; ++s) {
      if (pending[s] != 0) throw FormatError("taxonomy: cycle through synset '" + g.ids_[s] + "'");
    }
  }

  std::vector<SynsetId> roots;
  for (SynsetId s = 0; s < n; ++s) {
    if (g.parents_[s].empty()) roots.push_back(s);
  }
  if (roots.size() != 1) {
    std::string names;
    for (std::size_t k = 0; k < roots.size() && k < 5; ++k) names += (k ? ", '" : "'") + g.ids_[roots[k]] + "'";
    throw FormatError("taxonomy: expected exactly one root, found " + std::to_string(roots.size()) +
                      (roots.empty() ? "" : " (" + names + ")"));
  }
  g.root_ = roots.front();

  // Depth = shortest path to the root, BFS downwards.
  g.depth_.assign(n, kUnreached);
  g.depth_[g.root_] = 0;
  std::deque<SynsetId> queue{g.root_};
  while (!queue.empty()) {
    const SynsetId s = queue.front();
    queue.pop_front();
    for (SynsetId c : g.children_[s]) {
      if (g.depth_[c] == kUnreached) {
        g.depth_[c] = g.depth_[s] + 1;
        queue.push_back(c);
      }
    }
  }
  return g;
}

TaxonomyGraph load_taxonomy(std::istream& in) {
  enum class Section { none, edges, lemmas } section = Section::none;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::string>> lemmas;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body == "[edges]") {
      section = Section::edges;
      continue;
    }
    if (body == "[lemmas]") {
      section = Section::lemmas;
      continue;
    }
    if (section == Section::none) throw FormatError("taxonomy: record before any [edges]/[lemmas] header", line_no);
    const auto cols = text::split_on(text::chomp(line), '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw FormatError("taxonomy: expected two tab-separated fields", line_no);
    }
    auto& sink = section == Section::edges ? edges : lemmas;
    sink.emplace_back(std::string(cols[0]), std::string(cols[1]));
  }
  return TaxonomyGraph::build(edges, lemmas);
}

namespace {

void check_synset(const TaxonomyGraph& g, SynsetId s) {
  if (s >= g.size()) throw std::invalid_argument("unknown synset index " + std::to_string(s));
}

std::size_t undirected_distance(const TaxonomyGraph& g, SynsetId from, SynsetId to) {
  if (from == to) return 0;
  std::unordered_map<SynsetId, std::size_t> dist{{from, 0}};
  std::deque<SynsetId> queue{from};
  while (!queue.empty()) {
    const SynsetId s = queue.front();
    queue.pop_front();
    const std::size_t d = dist[s] + 1;
    for (auto nbrs : {g.parents(s), g.children(s)}) {
      for (SynsetId nb : nbrs) {
        if (dist.emplace(nb, d).second) {
          if (nb == to) return d;
          queue.push_back(nb);
        }
      }
    }
  }
  return kUnreached;
}

}  // namespace

PathDistance path_distance(const TaxonomyGraph& graph, SynsetId s1, SynsetId s2, DistanceMode mode) {
  check_synset(graph, s1);
  check_synset(graph, s2);
  if (s1 == s2) return {0, s1};
  auto up1 = graph.ancestors(s1);
  up1.emplace_back(s1, 0);
  auto up2 = graph.ancestors(s2);
  up2.emplace_back(s2, 0);
  std::unordered_map<SynsetId, std::size_t> d2(up2.begin(), up2.end());

  std::optional<PathDistance> best;
  for (const auto& [a, da] : up1) {
    auto it = d2.find(a);
    if (it == d2.end()) continue;
    const bool better = !best || graph.depth(a) > graph.depth(best->lca) ||
                        (graph.depth(a) == graph.depth(best->lca) && a < best->lca);
    if (better) best = PathDistance{da + it->second, a};
  }
  // Every synset reaches the root, so a common ancestor always exists.
  if (mode == DistanceMode::undirected) best->distance = undirected_distance(graph, s1, s2);
  return *best;
}

namespace {

struct PairKey {
  std::string a;
  std::string b;
  auto operator<=>(const PairKey&) const = default;
};

PairKey key_of(const std::string& x, const std::string& y) { return x < y ? PairKey{x, y} : PairKey{y, x}; }

bool share_synset(const TaxonomyGraph& g, const std::string& x, const std::string& y) {
  const auto sx = g.synsets_of(x);
  const auto sy = g.synsets_of(y);
  for (SynsetId s : sx) {
    if (std::binary_search(sy.begin(), sy.end(), s)) return true;
  }
  return false;
}

class Sampler {
 public:
  Sampler(const TaxonomyGraph& g, const SampleSpec& spec) : g_(g), spec_(spec), rng_(spec.seed) {
    for (SynsetId s = 0; s < g.size(); ++s) {
      if (g.lemmas(s).empty()) continue;
      with_lemmas_.push_back(s);
      if (g.lemmas(s).size() >= 2) multi_lemma_.push_back(s);
    }
    for (SynsetId s : with_lemmas_) {
      std::vector<SynsetId> ups;
      for (const auto& [a, d] : g.ancestors(s)) {
        if (!g.lemmas(a).empty()) ups.push_back(a);
      }
      if (!ups.empty()) hyponyms_.emplace_back(s, std::move(ups));
    }
    for (SynsetId p = 0; p < g.size(); ++p) {
      std::vector<SynsetId> kids;
      for (SynsetId c : g.children(p)) {
        if (!g.lemmas(c).empty()) kids.push_back(c);
      }
      if (kids.size() >= 2) sibling_groups_.push_back(std::move(kids));
    }
  }

  void run(data::Relation rel, std::size_t wanted, SampleResult& out) {
    std::size_t got = 0;
    if (wanted > 0 && feasible(rel)) {
      const std::size_t budget = 50 * wanted + 1000;
      for (std::size_t attempt = 0; attempt < budget && got < wanted; ++attempt) {
        auto pair = draw(rel);
        if (!pair || pair->x == pair->y) continue;
        if (!seen_.insert(key_of(pair->x, pair->y)).second) continue;
        out.pairs.push_back(std::move(*pair));
        ++got;
      }
    }
    if (got < wanted) out.shortfalls.push_back({rel, wanted, got});
  }

 private:
  bool feasible(data::Relation rel) const {
    switch (rel) {
      case data::Relation::hypernym:
        return !hyponyms_.empty();
      case data::Relation::synonym:
        return !multi_lemma_.empty();
      case data::Relation::cohyponym:
        return !sibling_groups_.empty();
      case data::Relation::random:
        return with_lemmas_.size() >= 2;
      default:
        return false;
    }
  }

  const std::string& lemma(SynsetId s) {
    const auto ls = g_.lemmas(s);
    return ls[rng_.index(ls.size())];
  }

  std::optional<data::WordPair> draw(data::Relation rel) {
    using data::Relation;
    switch (rel) {
      case Relation::hypernym: {
        const auto& [s, ups] = hyponyms_[rng_.index(hyponyms_.size())];
        const SynsetId a = ups[rng_.index(ups.size())];
        return data::WordPair{lemma(s), lemma(a), rel};
      }
      case Relation::synonym: {
        const auto ls = g_.lemmas(multi_lemma_[rng_.index(multi_lemma_.size())]);
        const std::size_t i = rng_.index(ls.size());
        std::size_t j = rng_.index(ls.size() - 1);
        if (j >= i) ++j;
        return data::WordPair{ls[i], ls[j], rel};
      }
      case Relation::cohyponym: {
        const auto& kids = sibling_groups_[rng_.index(sibling_groups_.size())];
        const std::size_t i = rng_.index(kids.size());
        std::size_t j = rng_.index(kids.size() - 1);
        if (j >= i) ++j;
        data::WordPair p{lemma(kids[i]), lemma(kids[j]), rel};
        if (share_synset(g_, p.x, p.y)) return std::nullopt;
        return p;
      }
      case Relation::random: {
        const SynsetId a = with_lemmas_[rng_.index(with_lemmas_.size())];
        const SynsetId b = with_lemmas_[rng_.index(with_lemmas_.size())];
        if (a == b) return std::nullopt;
        const auto pd = path_distance(g_, a, b, spec_.distance_mode);
        if (pd.lca != g_.root() || pd.distance < spec_.min_random_distance) return std::nullopt;
        data::WordPair p{lemma(a), lemma(b), rel};
        if (share_synset(g_, p.x, p.y)) return std::nullopt;
        return p;
      }
      default:
        return std::nullopt;
    }
  }

  const TaxonomyGraph& g_;
  const SampleSpec& spec_;
  Rng rng_;
  std::vector<SynsetId> with_lemmas_;
  std::vector<SynsetId> multi_lemma_;
  std::vector<std::pair<SynsetId, std::vector<SynsetId>>> hyponyms_;
  std::vector<std::vector<SynsetId>> sibling_groups_;
  std::set<PairKey> seen_;
};

}  // namespace

SampleResult sample_pairs(const TaxonomyGraph& graph, const SampleSpec& spec) {
  if (spec.min_random_distance == 0) throw std::invalid_argument("sample_pairs: min_random_distance must be >= 1");
  SampleResult result;
  Sampler sampler(graph, spec);
  sampler.run(data::Relation::hypernym, spec.hypernym, result);
  sampler.run(data::Relation::synonym, spec.synonym, result);
  sampler.run(data::Relation::cohyponym, spec.cohyponym, result);
  sampler.run(data::Relation::random, spec.random, result);
  return result;
}

}  // namespace relmtl::taxonomy
