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

#include "hierembed/eigen.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hierembed/errors.h"

namespace hierembed {
namespace {

double OffDiagonalNorm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

double FrobeniusNorm(const Matrix& a) {
  double sum = 0.0;
  for (double x : a.data()) sum += x * x;
  return std::sqrt(sum);
}

// Zeroes a(p, q) with the rotation from Golub & Van Loan (Alg. 8.4.2),
// updating both triangles of `a` and accumulating into `v`.
void Rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition SymmetricEigendecomposition(const Matrix& input,
                                               const JacobiOptions& options) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw Error("eigendecomposition needs a square matrix");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > options.max_asymmetry) {
        throw NumericalError("matrix is not symmetric at (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }

  Matrix a = input;
  Matrix v = Matrix::Identity(n);
  const double target = options.relative_tolerance * FrobeniusNorm(input);
  int sweep = 0;
  while (OffDiagonalNorm(a) >= target && target > 0.0) {
    if (sweep == options.max_sweeps) {
      throw NumericalError("Jacobi eigensolver did not converge in " +
                           std::to_string(options.max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) Rotate(a, v, p, q);
    }
    ++sweep;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });
  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

EmbeddingMatrix LowDimEmbeddings(const SimilarityMatrix& s, std::size_t k) {
  return LowDimEmbeddings(s, SymmetricEigendecomposition(s), k);
}

EmbeddingMatrix LowDimEmbeddings(const SimilarityMatrix& s,
                                 const EigenDecomposition& eig, std::size_t k) {
  const std::size_t n = s.size();
  if (k == 0 || k > n) {
    throw Error("embedding dimension must be in [1, " + std::to_string(n) +
                "], got " + std::to_string(k));
  }
  Matrix phi(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    const double scale = std::sqrt(std::max(eig.eigenvalues[j], 0.0));
    for (std::size_t i = 0; i < n; ++i) phi(i, j) = eig.eigenvectors(i, j) * scale;
  }
  return EmbeddingMatrix(s.classes(), std::move(phi));
}

}  // namespace hierembed
