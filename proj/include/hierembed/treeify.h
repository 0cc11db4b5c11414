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

#ifndef HIEREMBED_TREEIFY_H_
#define HIEREMBED_TREEIFY_H_

#include <cstdint>

#include "hierembed/taxonomy.h"

namespace hierembed {

// Number of distinct root paths to every node, saturating at UINT64_MAX.
std::vector<std::uint64_t> CountRootPaths(const Taxonomy& taxonomy);

// Extracts a tree from a rooted DAG by greedy root-path selection.
//
// The tree starts as the root plus the root paths of every class that has
// exactly one. The remaining classes are visited in class order; each gets
// the root path that adds the fewest nodes not yet in the tree, ties broken
// by the lexicographically smallest path. Only paths that enter the current
// tree through its own edges are eligible, so the result stays a tree.
//
// The result keeps the class list and contains exactly the nodes on the
// chosen root paths; nodes above no class are dropped.
Taxonomy TreeFromDag(const Taxonomy& dag);

}  // namespace hierembed

#endif  // HIEREMBED_TREEIFY_H_
