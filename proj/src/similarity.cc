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

#include "hierembed/similarity.h"

#include <cstdint>
#include <utility>

#include "hierembed/errors.h"

namespace hierembed {
namespace {

int CheckedMaxHeight(const Taxonomy& taxonomy) {
  const int height = taxonomy.max_height();
  if (height <= 0) {
    throw TaxonomyError(TaxonomyError::Kind::kDegenerateHeight,
                        "hierarchy has height 0");
  }
  return height;
}

}  // namespace

double Dissimilarity(const Taxonomy& taxonomy, NodeId u, NodeId v) {
  const int height = CheckedMaxHeight(taxonomy);
  return static_cast<double>(taxonomy.Height(taxonomy.Lcs(u, v))) / height;
}

double Dissimilarity(const Taxonomy& taxonomy, std::string_view u,
                     std::string_view v) {
  return Dissimilarity(taxonomy, taxonomy.Id(u), taxonomy.Id(v));
}

double Similarity(const Taxonomy& taxonomy, NodeId u, NodeId v) {
  return 1.0 - Dissimilarity(taxonomy, u, v);
}

double Similarity(const Taxonomy& taxonomy, std::string_view u,
                  std::string_view v) {
  return Similarity(taxonomy, taxonomy.Id(u), taxonomy.Id(v));
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> classes,
                                   Matrix values)
    : classes_(std::move(classes)), values_(std::move(values)) {
  if (values_.rows() != classes_.size() || values_.cols() != classes_.size()) {
    throw Error("similarity matrix shape does not match class count");
  }
}

SimilarityMatrix ComputeSimilarityMatrix(const Taxonomy& taxonomy,
                                         Execution execution) {
  const auto classes = taxonomy.classes();
  const std::int64_t n = static_cast<std::int64_t>(classes.size());
  if (n == 0) {
    throw TaxonomyError(TaxonomyError::Kind::kNoClasses, "no classes");
  }
  const double height = CheckedMaxHeight(taxonomy);
  Matrix s(n, n);
  // Upper triangle row by row, then mirror. Each entry is independent, so
  // the parallel loop writes the same values as the serial one.
  auto fill_row = [&](std::int64_t i) {
    for (std::int64_t j = i; j < n; ++j) {
      const NodeId lcs = taxonomy.Lcs(classes[i], classes[j]);
      s(i, j) = 1.0 - taxonomy.Height(lcs) / height;
    }
  };
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) fill_row(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) fill_row(i);
  }
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < i; ++j) s(i, j) = s(j, i);
  }
  return SimilarityMatrix(taxonomy.class_names(), std::move(s));
}

std::vector<int> LcsHeightMatrix(const Taxonomy& taxonomy,
                                 Execution execution) {
  const auto classes = taxonomy.classes();
  const std::int64_t n = static_cast<std::int64_t>(classes.size());
  std::vector<int> heights(n * n);
  auto fill_row = [&](std::int64_t i) {
    for (std::int64_t j = 0; j < n; ++j) {
      heights[i * n + j] = taxonomy.Height(taxonomy.Lcs(classes[i], classes[j]));
    }
  };
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) fill_row(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) fill_row(i);
  }
  return heights;
}

}  // namespace hierembed
