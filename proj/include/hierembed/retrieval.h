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

// Dot-product ranking and retrieval metrics.
//
// Hierarchical precision at k compares the summed class similarity of the
// top-k results against the best achievable sum, which is the sum of the k
// largest similarities in the database (rearrangement inequality), so no
// permutation search is needed.

#ifndef HIEREMBED_RETRIEVAL_H_
#define HIEREMBED_RETRIEVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hierembed/matrix.h"
#include "hierembed/similarity.h"

namespace hierembed {

struct RankedEntry {
  std::int64_t id = 0;
  std::size_t label = 0;
  double score = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
  std::size_t query_label = 0;
  std::vector<RankedEntry> entries;  // scores non-increasing, ties by id

  std::size_t size() const { return entries.size(); }
};

// Retrieval database: row i of `vectors` has id ids[i] and class labels[i].
struct LabeledVectors {
  std::vector<std::int64_t> ids;
  std::vector<std::size_t> labels;
  Matrix vectors;

  std::size_t size() const { return labels.size(); }
  // Throws Error on inconsistent sizes.
  void Validate() const;
};

// Sorts the database by descending dot product with `query`, ascending id on
// ties. `exclude` drops one database row (leave-one-out). Throws Error if
// nothing is left to rank.
RankedList Rank(std::span<const double> query, std::size_t query_label,
                const LabeledVectors& database,
                std::optional<std::size_t> exclude = std::nullopt);

// HP@1 .. HP@k_max. Throws Error unless 1 <= k_max <= r.size(). When the
// best achievable sum is zero every ranking is optimal and HP is 1.
std::vector<double> HierarchicalPrecisionCurve(const RankedList& r,
                                               const SimilarityMatrix& s,
                                               std::size_t k_max);
double HierarchicalPrecisionAtK(const RankedList& r, const SimilarityMatrix& s,
                                std::size_t k);

// Mean of HP@1 .. HP@K (rectangle rule over the HP curve).
double AverageHierarchicalPrecision(const RankedList& r,
                                    const SimilarityMatrix& s, std::size_t K);

struct MahpResult {
  double value = 0.0;
  std::size_t clipped_queries = 0;  // queries with fewer than K results
};

// Mean AHP@K over queries; K is clipped per query to its list length.
MahpResult MeanAverageHierarchicalPrecision(std::span<const RankedList> queries,
                                            const SimilarityMatrix& s,
                                            std::size_t K = 250);

// Relevance is an exact label match with the query.
double PrecisionAtK(const RankedList& r, std::size_t k);
// Non-interpolated AP; 0 when the list holds no relevant item.
double AveragePrecision(const RankedList& r);

struct MapResult {
  double value = 0.0;
  std::size_t queries_without_relevant = 0;
};
MapResult MeanAveragePrecision(std::span<const RankedList> queries);

struct BalancedAccuracyResult {
  double value = 0.0;
  std::size_t absent_classes = 0;  // classes never seen as a true label
};

// Mean per-class recall over the classes present in the ground truth.
// Predictions are (true label, predicted label).
BalancedAccuracyResult BalancedAccuracy(
    std::span<const std::pair<std::size_t, std::size_t>> predictions,
    std::size_t num_classes);

}  // namespace hierembed

#endif  // HIEREMBED_RETRIEVAL_H_
