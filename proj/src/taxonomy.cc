/*
 * Copyright 2026 The hierembed Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hierembed/taxonomy.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <deque>
#include <sstream>
#include <utility>

#include "hierembed/errors.h"
#include "hierembed/random.h"

namespace hierembed {
namespace {

using Kind = TaxonomyError::Kind;

struct NumberedEdge {
  Edge edge;
  std::size_t line;
};

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

// Calls `fn(line_number, fields)` for every non-blank, comment-stripped line.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto fields = SplitFields(line);
    if (!fields.empty()) fn(line_number, fields);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

std::vector<NumberedEdge> ParseNumberedEdges(std::string_view text) {
  std::vector<NumberedEdge> edges;
  ForEachLine(text, [&](std::size_t line, std::span<std::string_view> fields) {
    if (fields.size() != 2) {
      throw ParseError(line, "expected 'parent child', found " +
                                 std::to_string(fields.size()) + " field(s)");
    }
    edges.push_back({{std::string(fields[0]), std::string(fields[1])}, line});
  });
  return edges;
}

}  // namespace

Taxonomy Taxonomy::Create(std::span<const Edge> edges,
                          std::optional<std::vector<std::string>> classes) {
  if (edges.empty()) {
    throw TaxonomyError(Kind::kNoRoot, "taxonomy has no edges");
  }
  Taxonomy t;
  for (const Edge& e : edges) {
    t.names_.push_back(e.parent);
    t.names_.push_back(e.child);
  }
  std::sort(t.names_.begin(), t.names_.end());
  t.names_.erase(std::unique(t.names_.begin(), t.names_.end()), t.names_.end());

  const std::size_t n = t.names_.size();
  t.children_.resize(n);
  t.parents_.resize(n);

  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.parent == e.child) {
      throw TaxonomyError(Kind::kCycle, "cycle detected: self-loop on '" +
                                            e.parent + "'");
    }
    pairs.emplace_back(*t.Find(e.parent), *t.Find(e.child));
  }
  std::sort(pairs.begin(), pairs.end());
  if (auto dup = std::adjacent_find(pairs.begin(), pairs.end());
      dup != pairs.end()) {
    throw TaxonomyError(Kind::kDuplicateEdge,
                        "duplicate edge '" + t.names_[dup->first] + " " +
                            t.names_[dup->second] + "'");
  }
  for (auto [parent, child] : pairs) {
    t.children_[parent].push_back(child);
    t.parents_[child].push_back(parent);
  }
  for (auto& p : t.parents_) std::sort(p.begin(), p.end());
  t.num_edges_ = pairs.size();

  // Kahn's algorithm; leftovers sit on or below a cycle.
  std::vector<std::size_t> indegree(n);
  std::vector<NodeId> roots;
  for (NodeId v = 0; v < n; ++v) {
    indegree[v] = t.parents_[v].size();
    if (indegree[v] == 0) roots.push_back(v);
  }
  std::deque<NodeId> ready(roots.begin(), roots.end());
  while (!ready.empty()) {
    const NodeId v = ready.front();
    ready.pop_front();
    t.topo_order_.push_back(v);
    for (NodeId c : t.children_[v]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (t.topo_order_.size() != n) {
    NodeId witness = 0;
    while (indegree[witness] == 0) ++witness;
    throw TaxonomyError(Kind::kCycle, "cycle detected involving '" +
                                          t.names_[witness] + "'");
  }
  if (roots.size() > 1) {
    std::string list;
    for (std::size_t i = 0; i < roots.size() && i < 5; ++i) {
      list += (i ? ", '" : "'") + t.names_[roots[i]] + "'";
    }
    if (roots.size() > 5) list += ", ...";
    throw TaxonomyError(Kind::kMultipleRoots,
                        std::to_string(roots.size()) + " roots found: " + list);
  }
  t.root_ = roots.front();

  t.heights_.assign(n, 0);
  for (auto it = t.topo_order_.rbegin(); it != t.topo_order_.rend(); ++it) {
    int h = 0;
    for (NodeId c : t.children_[*it]) h = std::max(h, t.heights_[c] + 1);
    t.heights_[*it] = h;
  }

  t.words_ = (n + 63) / 64;
  t.ancestors_.assign(n * t.words_, 0);
  for (NodeId v : t.topo_order_) {
    std::uint64_t* row = &t.ancestors_[v * t.words_];
    for (NodeId p : t.parents_[v]) {
      const std::uint64_t* prow = &t.ancestors_[p * t.words_];
      for (std::size_t w = 0; w < t.words_; ++w) row[w] |= prow[w];
    }
    row[v / 64] |= std::uint64_t{1} << (v % 64);
  }

  if (!classes) {
    for (NodeId v = 0; v < n; ++v) {
      if (t.IsLeaf(v)) t.class_nodes_.push_back(v);
    }
  } else {
    if (classes->empty()) {
      throw TaxonomyError(Kind::kNoClasses, "class list is empty");
    }
    std::vector<bool> seen(n, false);
    for (const std::string& name : *classes) {
      const auto id = t.Find(name);
      if (!id) {
        throw TaxonomyError(Kind::kUnknownNode,
                            "class '" + name + "' is not a node of the hierarchy");
      }
      if (seen[*id]) {
        throw TaxonomyError(Kind::kDuplicateClass,
                            "class '" + name + "' listed twice");
      }
      seen[*id] = true;
      t.class_nodes_.push_back(*id);
    }
  }
  return t;
}

std::optional<NodeId> Taxonomy::Find(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

NodeId Taxonomy::Id(std::string_view name) const {
  if (auto id = Find(name)) return *id;
  throw TaxonomyError(Kind::kUnknownNode,
                      "unknown node '" + std::string(name) + "'");
}

std::vector<std::string> Taxonomy::class_names() const {
  std::vector<std::string> out;
  out.reserve(class_nodes_.size());
  for (NodeId c : class_nodes_) out.push_back(names_[c]);
  return out;
}

std::vector<Edge> Taxonomy::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (NodeId p = 0; p < names_.size(); ++p) {
    for (NodeId c : children_[p]) out.push_back({names_[p], names_[c]});
  }
  return out;
}

bool Taxonomy::IsTree() const {
  for (NodeId v = 0; v < names_.size(); ++v) {
    if (v != root_ && parents_[v].size() != 1) return false;
  }
  return true;
}

bool Taxonomy::ClassesAreLeaves() const {
  return std::all_of(class_nodes_.begin(), class_nodes_.end(),
                     [&](NodeId c) { return IsLeaf(c); });
}

NodeId Taxonomy::Lcs(NodeId u, NodeId v) const {
  // A common ancestor with a common-ancestor child is strictly taller than
  // that child, so the minimum-height common ancestor is always minimal.
  const std::uint64_t* a = &ancestors_[u * words_];
  const std::uint64_t* b = &ancestors_[v * words_];
  NodeId best = root_;
  int best_height = heights_[root_];
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t common = a[w] & b[w];
    while (common != 0) {
      const NodeId node = w * 64 + std::countr_zero(common);
      common &= common - 1;
      if (heights_[node] < best_height ||
          (heights_[node] == best_height && node < best)) {
        best = node;
        best_height = heights_[node];
      }
    }
  }
  return best;
}

std::vector<Edge> ParseEdgeList(std::string_view text) {
  std::vector<Edge> edges;
  for (auto& e : ParseNumberedEdges(text)) edges.push_back(std::move(e.edge));
  return edges;
}

std::vector<std::string> ParseClassList(std::string_view text) {
  std::vector<std::string> classes;
  ForEachLine(text, [&](std::size_t line, std::span<std::string_view> fields) {
    if (fields.size() != 1) {
      throw ParseError(line, "expected one class identifier per line");
    }
    classes.emplace_back(fields[0]);
  });
  return classes;
}

Taxonomy ParseTaxonomy(std::string_view text,
                       std::optional<std::vector<std::string>> classes) {
  auto numbered = ParseNumberedEdges(text);
  if (numbered.empty()) throw ParseError(0, "hierarchy contains no edges");
  std::vector<std::size_t> order(numbered.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return numbered[a].edge < numbered[b].edge;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& prev = numbered[order[i - 1]];
    const auto& cur = numbered[order[i]];
    if (prev.edge == cur.edge) {
      throw TaxonomyError(Kind::kDuplicateEdge,
                          "line " + std::to_string(cur.line) +
                              ": duplicate edge '" + cur.edge.parent + " " +
                              cur.edge.child + "' (first on line " +
                              std::to_string(prev.line) + ")");
    }
  }
  std::vector<Edge> edges;
  edges.reserve(numbered.size());
  for (auto& e : numbered) edges.push_back(std::move(e.edge));
  return Taxonomy::Create(edges, std::move(classes));
}

std::string FormatEdgeList(const Taxonomy& taxonomy) {
  std::string out;
  for (const Edge& e : taxonomy.edges()) {
    out += e.parent;
    out += ' ';
    out += e.child;
    out += '\n';
  }
  return out;
}

namespace {

class TreeGrower {
 public:
  explicit TreeGrower(std::uint64_t seed) : rng_(seed) {}

  void Grow(const std::string& parent, std::size_t leaves) {
    if (leaves == 1) {
      std::string attach = parent;
      if (rng_.Uniform() < 0.25) attach = AddInner(parent);
      edges_.push_back({attach, Name('c', next_leaf_++)});
      return;
    }
    const std::size_t max_groups = std::min<std::size_t>(leaves, 4);
    const std::size_t groups = 2 + rng_.Index(max_groups - 1);
    std::vector<std::size_t> cuts(leaves - 1);
    for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i + 1;
    rng_.Shuffle(std::span(cuts));
    cuts.resize(groups - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(leaves);
    std::size_t start = 0;
    for (std::size_t cut : cuts) {
      const std::size_t size = cut - start;
      start = cut;
      if (size == 1) {
        Grow(parent, 1);
      } else {
        Grow(AddInner(parent), size);
      }
    }
  }

  std::vector<Edge> TakeEdges() { return std::move(edges_); }

 private:
  static std::string Name(char prefix, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%04zu", prefix, index);
    return buf;
  }

  std::string AddInner(const std::string& parent) {
    std::string name = Name('n', next_inner_++);
    edges_.push_back({parent, name});
    return name;
  }

  Rng rng_;
  std::vector<Edge> edges_;
  std::size_t next_leaf_ = 0;
  std::size_t next_inner_ = 1;
};

}  // namespace

Taxonomy RandomTree(std::size_t num_leaves, std::uint64_t seed) {
  if (num_leaves == 0) {
    throw TaxonomyError(Kind::kNoClasses, "random tree needs at least one leaf");
  }
  TreeGrower grower(seed);
  if (num_leaves == 1) {
    grower.Grow("n0000", 1);
  } else {
    grower.Grow("n0000", num_leaves);
  }
  auto edges = grower.TakeEdges();
  return Taxonomy::Create(edges);
}

}  // namespace hierembed
