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

#include "hierembed/treeify.h"

#include <algorithm>
#include <limits>
#include <optional>

#include "hierembed/errors.h"

namespace hierembed {

std::vector<std::uint64_t> CountRootPaths(const Taxonomy& taxonomy) {
  std::vector<std::uint64_t> counts(taxonomy.num_nodes(), 0);
  counts[taxonomy.root()] = 1;
  for (NodeId v : taxonomy.topological_order()) {
    for (NodeId c : taxonomy.children(v)) {
      const std::uint64_t sum = counts[c] + counts[v];
      counts[c] = sum < counts[c] ? std::numeric_limits<std::uint64_t>::max() : sum;
    }
  }
  return counts;
}

namespace {

constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();

std::vector<NodeId> TreePath(const std::vector<NodeId>& tree_parent, NodeId v) {
  std::vector<NodeId> path;
  for (NodeId x = v; x != kNoParent; x = tree_parent[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

Taxonomy TreeFromDag(const Taxonomy& dag) {
  const std::size_t n = dag.num_nodes();
  const auto counts = CountRootPaths(dag);
  std::vector<bool> in_tree(n, false);
  std::vector<NodeId> tree_parent(n, kNoParent);
  in_tree[dag.root()] = true;

  for (NodeId c : dag.classes()) {
    if (counts[c] == 0) {
      throw TaxonomyError(TaxonomyError::Kind::kNoRootPath,
                          "no root path to class '" + dag.name(c) + "'");
    }
    if (counts[c] != 1) continue;
    for (NodeId x = c; x != dag.root(); x = dag.parents(x).front()) {
      in_tree[x] = true;
      tree_parent[x] = dag.parents(x).front();
    }
  }

  struct Best {
    std::size_t cost;
    std::vector<NodeId> path;
  };
  for (NodeId c : dag.classes()) {
    if (in_tree[c]) continue;
    // Cheapest tree-consistent root path to every ancestor of c, in
    // topological order so parents are settled first.
    std::vector<std::optional<Best>> best(n);
    for (NodeId v : dag.topological_order()) {
      if (!dag.IsAncestor(v, c)) continue;
      if (in_tree[v]) {
        best[v] = Best{0, TreePath(tree_parent, v)};
        continue;
      }
      std::optional<Best> chosen;
      for (NodeId p : dag.parents(v)) {
        const auto& candidate = best[p];
        if (!candidate) continue;
        Best extended{candidate->cost + 1, candidate->path};
        extended.path.push_back(v);
        if (!chosen || extended.cost < chosen->cost ||
            (extended.cost == chosen->cost && extended.path < chosen->path)) {
          chosen = std::move(extended);
        }
      }
      best[v] = std::move(chosen);
    }
    if (!best[c]) {
      throw TaxonomyError(TaxonomyError::Kind::kNoRootPath,
                          "no root path to class '" + dag.name(c) + "'");
    }
    const auto& path = best[c]->path;
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (!in_tree[path[i]]) {
        in_tree[path[i]] = true;
        tree_parent[path[i]] = path[i - 1];
      }
    }
  }

  std::vector<Edge> edges;
  for (NodeId v = 0; v < n; ++v) {
    if (in_tree[v] && tree_parent[v] != kNoParent) {
      edges.push_back({dag.name(tree_parent[v]), dag.name(v)});
    }
  }
  return Taxonomy::Create(edges, dag.class_names());
}

}  // namespace hierembed
