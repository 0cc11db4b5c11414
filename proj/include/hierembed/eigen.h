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

#ifndef HIEREMBED_EIGEN_H_
#define HIEREMBED_EIGEN_H_

#include <vector>

#include "hierembed/embedding.h"
#include "hierembed/matrix.h"
#include "hierembed/similarity.h"

namespace hierembed {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column j pairs with eigenvalues[j]
  int sweeps = 0;
};

struct JacobiOptions {
  double relative_tolerance = 1e-12;
  int max_sweeps = 100;
  double max_asymmetry = 1e-12;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
// relative_tolerance * ||A||_F. Throws NumericalError for non-symmetric input
// or if max_sweeps is exhausted.
EigenDecomposition SymmetricEigendecomposition(const Matrix& a,
                                               const JacobiOptions& options = {});

inline EigenDecomposition SymmetricEigendecomposition(
    const SimilarityMatrix& s, const JacobiOptions& options = {}) {
  return SymmetricEigendecomposition(s.values(), options);
}

// Rank-k approximation Q_k * sqrt(max(Lambda_k, 0)). Rows are generally not
// unit-norm.
EmbeddingMatrix LowDimEmbeddings(const SimilarityMatrix& s, std::size_t k);
EmbeddingMatrix LowDimEmbeddings(const SimilarityMatrix& s,
                                 const EigenDecomposition& eig, std::size_t k);

}  // namespace hierembed

#endif  // HIEREMBED_EIGEN_H_
