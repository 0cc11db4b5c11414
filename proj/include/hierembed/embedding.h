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

// Class embeddings whose pairwise dot products reproduce a similarity matrix.
//
// The exact construction places class i in the first i coordinates: its
// first i-1 coordinates solve a lower-triangular system against the classes
// already placed, and coordinate i takes the non-negative root that makes
// the row unit-norm. The resulting matrix is lower-triangular with
// non-negative diagonal, i.e. a Cholesky factor of S.

#ifndef HIEREMBED_EMBEDDING_H_
#define HIEREMBED_EMBEDDING_H_

#include <span>
#include <string>
#include <vector>

#include "hierembed/matrix.h"
#include "hierembed/similarity.h"

namespace hierembed {

inline constexpr double kMinPivot = 1e-12;
inline constexpr double kRadicandTolerance = 1e-9;

// Rows are class centroids in `class_order`.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::vector<std::string> class_order, Matrix rows);

  std::size_t num_classes() const { return rows_.rows(); }
  std::size_t dim() const { return rows_.cols(); }
  const std::vector<std::string>& class_order() const { return class_order_; }
  const Matrix& rows() const { return rows_; }
  std::span<const double> row(std::size_t i) const { return rows_.row(i); }

 private:
  std::vector<std::string> class_order_;
  Matrix rows_;
};

// Solves L x = rhs for the leading k x k block of `lower`, k = rhs.size().
// Entries above the diagonal are ignored. Throws NumericalError if a
// diagonal entry has magnitude <= kMinPivot.
std::vector<double> ForwardSubstitution(const Matrix& lower,
                                        std::span<const double> rhs);

// Exact n-dimensional embedding. Throws NumericalError if S lacks a unit
// diagonal, if a class would need a negative squared norm below
// -kRadicandTolerance (S not realizable, typically a non-tree hierarchy), or
// if two classes coincide (zero pivot).
EmbeddingMatrix ComputeEmbeddings(const SimilarityMatrix& s);

// max_ij |phi_i . phi_j - S_ij|.
double ReconstructionError(const EmbeddingMatrix& phi, const SimilarityMatrix& s,
                           Execution execution = Execution::kParallel);

}  // namespace hierembed

#endif  // HIEREMBED_EMBEDDING_H_
