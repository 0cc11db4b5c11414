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

// Class hierarchies as rooted DAGs of is-a edges.
//
// A Taxonomy is immutable once built. Node ids are assigned in lexicographic
// order of the identifiers, so comparing ids is the same as comparing names;
// every deterministic tie-break in the library relies on this.

#ifndef HIEREMBED_TAXONOMY_H_
#define HIEREMBED_TAXONOMY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hierembed {

using NodeId = std::size_t;

struct Edge {
  std::string parent;
  std::string child;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class Taxonomy {
 public:
  // Builds and validates the graph. When `classes` is absent, the classes are
  // all leaves in lexicographic order. Throws TaxonomyError on cycles,
  // multiple roots, duplicate edges, duplicate classes, or unknown classes.
  static Taxonomy Create(std::span<const Edge> edges,
                         std::optional<std::vector<std::string>> classes = {});

  std::size_t num_nodes() const { return names_.size(); }
  std::size_t num_classes() const { return class_nodes_.size(); }

  const std::string& name(NodeId node) const { return names_[node]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> Find(std::string_view name) const;
  // Like Find, but throws TaxonomyError(kUnknownNode).
  NodeId Id(std::string_view name) const;

  NodeId root() const { return root_; }
  std::span<const NodeId> children(NodeId node) const {
    return children_[node];
  }
  std::span<const NodeId> parents(NodeId node) const { return parents_[node]; }

  // Class index -> node, in the fixed class order.
  std::span<const NodeId> classes() const { return class_nodes_; }
  std::vector<std::string> class_names() const;

  // All edges sorted by (parent, child).
  std::vector<Edge> edges() const;
  std::size_t num_edges() const { return num_edges_; }

  // Parents before children.
  std::span<const NodeId> topological_order() const { return topo_order_; }

  // Longest downward path to a leaf, in edges.
  int Height(NodeId node) const { return heights_[node]; }
  int max_height() const { return heights_[root_]; }

  bool IsLeaf(NodeId node) const { return children_[node].empty(); }
  bool IsTree() const;
  bool ClassesAreLeaves() const;

  // A node is its own ancestor.
  bool IsAncestor(NodeId ancestor, NodeId node) const {
    const std::uint64_t word = ancestors_[node * words_ + ancestor / 64];
    return (word >> (ancestor % 64)) & 1u;
  }

  // Lowest common subsumer. Among common ancestors without a child that is
  // itself a common ancestor, picks the one of minimum height, then the
  // smallest identifier.
  NodeId Lcs(NodeId u, NodeId v) const;

 private:
  Taxonomy() = default;

  std::vector<std::string> names_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<NodeId>> parents_;
  std::vector<NodeId> class_nodes_;
  std::vector<NodeId> topo_order_;
  std::vector<int> heights_;
  // Row-major bitsets: bit a of row v is set iff a is an ancestor of v.
  std::vector<std::uint64_t> ancestors_;
  std::size_t words_ = 0;
  std::size_t num_edges_ = 0;
  NodeId root_ = 0;
};

// Parses "parent child" lines. '#' starts a comment; blank lines are skipped.
// Throws ParseError with the offending line number.
std::vector<Edge> ParseEdgeList(std::string_view text);

// One identifier per line, order significant; '#' comments allowed.
std::vector<std::string> ParseClassList(std::string_view text);

// ParseEdgeList + duplicate-edge detection (reported with its line) +
// Taxonomy::Create.
Taxonomy ParseTaxonomy(std::string_view text,
                       std::optional<std::vector<std::string>> classes = {});

std::string FormatEdgeList(const Taxonomy& taxonomy);

// Random tree with exactly `num_leaves` leaves, built by recursively
// splitting the leaf set into 2-4 groups and occasionally inserting unary
// chain nodes so that subtree heights vary. Leaves are named "c0000",
// "c0001", ... and are the classes; inner nodes are named "n0000", ...
Taxonomy RandomTree(std::size_t num_leaves, std::uint64_t seed);

}  // namespace hierembed

#endif  // HIEREMBED_TAXONOMY_H_
