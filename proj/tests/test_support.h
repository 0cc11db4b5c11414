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

// Shared generators for tests. Independent of the library's own RandomTree.

#ifndef HIEREMBED_TESTS_TEST_SUPPORT_H_
#define HIEREMBED_TESTS_TEST_SUPPORT_H_

#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hierembed/taxonomy.h"

namespace hierembed::testing {

inline std::string NodeName(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "v%02zu", i);
  return buf;
}

// Node 0 is the root; node i > 0 gets 1..max_parents distinct parents < i.
inline std::vector<Edge> RandomDagEdges(std::size_t num_nodes,
                                        std::size_t max_parents,
                                        std::mt19937_64& gen) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < num_nodes; ++i) {
    std::uniform_int_distribution<std::size_t> count(
        1, std::min(max_parents, i));
    std::set<std::size_t> parents;
    const std::size_t k = count(gen);
    while (parents.size() < k) {
      parents.insert(std::uniform_int_distribution<std::size_t>(0, i - 1)(gen));
    }
    for (std::size_t p : parents) edges.push_back({NodeName(p), NodeName(i)});
  }
  return edges;
}

inline Taxonomy RandomDag(std::size_t num_nodes, std::size_t max_parents,
                          std::mt19937_64& gen) {
  const auto edges = RandomDagEdges(num_nodes, max_parents, gen);
  return Taxonomy::Create(edges);
}

// Random recursive tree: each node picks one earlier parent.
inline Taxonomy RandomRecursiveTree(std::size_t num_nodes, std::mt19937_64& gen) {
  return RandomDag(num_nodes, 1, gen);
}

}  // namespace hierembed::testing

#endif  // HIEREMBED_TESTS_TEST_SUPPORT_H_
