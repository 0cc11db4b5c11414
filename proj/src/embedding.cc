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

#include "hierembed/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <utility>

#include "hierembed/errors.h"

namespace hierembed {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> class_order,
                                 Matrix rows)
    : class_order_(std::move(class_order)), rows_(std::move(rows)) {
  if (class_order_.size() != rows_.rows()) {
    throw Error("embedding has " + std::to_string(rows_.rows()) +
                " rows but " + std::to_string(class_order_.size()) +
                " class names");
  }
}

std::vector<double> ForwardSubstitution(const Matrix& lower,
                                        std::span<const double> rhs) {
  const std::size_t k = rhs.size();
  if (lower.rows() < k || lower.cols() < k) {
    throw Error("triangular system is smaller than the right-hand side");
  }
  std::vector<double> x(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double pivot = lower(j, j);
    if (!(std::abs(pivot) > kMinPivot)) {
      throw NumericalError("zero pivot at row " + std::to_string(j) +
                           " of triangular system");
    }
    double sum = rhs[j];
    for (std::size_t l = 0; l < j; ++l) sum -= lower(j, l) * x[l];
    x[j] = sum / pivot;
  }
  return x;
}

EmbeddingMatrix ComputeEmbeddings(const SimilarityMatrix& s) {
  const std::size_t n = s.size();
  const auto& names = s.classes();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(s(i, i) - 1.0) > kMinPivot) {
      throw NumericalError("similarity of class '" + names[i] +
                           "' to itself is not 1 (is it a leaf?)");
    }
  }
  Matrix phi(n, n);
  if (n == 0) return EmbeddingMatrix({}, std::move(phi));
  phi(0, 0) = 1.0;
  std::vector<double> rhs;
  for (std::size_t i = 1; i < n; ++i) {
    rhs.assign(i, 0.0);
    for (std::size_t j = 0; j < i; ++j) rhs[j] = s(j, i);
    std::vector<double> head;
    try {
      head = ForwardSubstitution(phi, rhs);
    } catch (const NumericalError&) {
      std::size_t j = 0;
      while (std::abs(phi(j, j)) > kMinPivot) ++j;
      throw NumericalError("class '" + names[j] +
                           "' has a zero last coordinate; it coincides with "
                           "an earlier class (similarity 1)");
    }
    double norm2 = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      phi(i, j) = head[j];
      norm2 += head[j] * head[j];
    }
    const double radicand = 1.0 - norm2;
    if (radicand < -kRadicandTolerance) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.3g", radicand);
      throw NumericalError("similarities are not realizable on the unit sphere "
                           "at class '" + names[i] + "' (1 - |x|^2 = " + buf +
                           "); is the hierarchy a tree?");
    }
    phi(i, i) = std::sqrt(std::max(radicand, 0.0));
  }
  return EmbeddingMatrix(names, std::move(phi));
}

double ReconstructionError(const EmbeddingMatrix& phi, const SimilarityMatrix& s,
                           Execution execution) {
  const std::int64_t n = static_cast<std::int64_t>(s.size());
  if (static_cast<std::int64_t>(phi.num_classes()) != n) {
    throw Error("embedding has " + std::to_string(phi.num_classes()) +
                " classes, similarity matrix has " + std::to_string(n));
  }
  std::vector<double> row_max(n, 0.0);
  auto scan_row = [&](std::int64_t i) {
    double worst = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(Dot(phi.row(i), phi.row(j)) - s(i, j)));
    }
    row_max[i] = worst;
  };
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) scan_row(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) scan_row(i);
  }
  return n == 0 ? 0.0 : *std::max_element(row_max.begin(), row_max.end());
}

}  // namespace hierembed
