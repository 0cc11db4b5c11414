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

#ifndef HIEREMBED_SIMILARITY_H_
#define HIEREMBED_SIMILARITY_H_

#include <string>
#include <string_view>
#include <vector>

#include "hierembed/matrix.h"
#include "hierembed/taxonomy.h"

namespace hierembed {

// Height of the LCS divided by the height of the hierarchy, in [0, 1].
// Throws TaxonomyError(kDegenerateHeight) if the hierarchy has height 0.
double Dissimilarity(const Taxonomy& taxonomy, NodeId u, NodeId v);
double Dissimilarity(const Taxonomy& taxonomy, std::string_view u,
                     std::string_view v);

// 1 - Dissimilarity.
double Similarity(const Taxonomy& taxonomy, NodeId u, NodeId v);
double Similarity(const Taxonomy& taxonomy, std::string_view u,
                  std::string_view v);

// Symmetric matrix of pairwise class similarities in the taxonomy's class
// order.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<std::string> classes, Matrix values);

  std::size_t size() const { return classes_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }
  const Matrix& values() const { return values_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(i, j);
  }

 private:
  std::vector<std::string> classes_;
  Matrix values_;
};

SimilarityMatrix ComputeSimilarityMatrix(
    const Taxonomy& taxonomy, Execution execution = Execution::kParallel);

// Integer LCS heights for every ordered pair of classes, both triangles
// computed independently (the metric check uses them to test symmetry).
// Row-major n*n.
std::vector<int> LcsHeightMatrix(const Taxonomy& taxonomy,
                                 Execution execution = Execution::kParallel);

}  // namespace hierembed

#endif  // HIEREMBED_SIMILARITY_H_
