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

#include "hierembed/retrieval.h"

#include <algorithm>
#include <functional>
#include <string>

#include "hierembed/errors.h"

namespace hierembed {

void LabeledVectors::Validate() const {
  if (ids.size() != labels.size() || vectors.rows() != labels.size()) {
    throw Error("database ids, labels and vectors disagree in length");
  }
}

RankedList Rank(std::span<const double> query, std::size_t query_label,
                const LabeledVectors& database,
                std::optional<std::size_t> exclude) {
  database.Validate();
  if (query.size() != database.vectors.cols()) {
    throw Error("query has dimension " + std::to_string(query.size()) +
                ", database vectors have " +
                std::to_string(database.vectors.cols()));
  }
  RankedList out;
  out.query_label = query_label;
  out.entries.reserve(database.size());
  for (std::size_t i = 0; i < database.size(); ++i) {
    if (exclude && *exclude == i) continue;
    out.entries.push_back(
        {database.ids[i], database.labels[i], Dot(query, database.vectors.row(i))});
  }
  if (out.entries.empty()) throw Error("cannot rank an empty database");
  std::sort(out.entries.begin(), out.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
  return out;
}

std::vector<double> HierarchicalPrecisionCurve(const RankedList& r,
                                               const SimilarityMatrix& s,
                                               std::size_t k_max) {
  const std::size_t m = r.size();
  if (k_max < 1 || k_max > m) {
    throw Error("cutoff " + std::to_string(k_max) + " outside [1, " +
                std::to_string(m) + "]");
  }
  if (r.query_label >= s.size()) throw Error("query label out of range");
  std::vector<double> sims(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (r.entries[i].label >= s.size()) throw Error("result label out of range");
    sims[i] = s(r.query_label, r.entries[i].label);
  }
  std::vector<double> best = sims;
  std::partial_sort(best.begin(), best.begin() + k_max, best.end(),
                    std::greater<>());
  std::vector<double> curve(k_max);
  double got = 0.0;
  double ideal = 0.0;
  for (std::size_t k = 0; k < k_max; ++k) {
    got += sims[k];
    ideal += best[k];
    // Equal multisets summed in different orders can round above 1.
    curve[k] = ideal > 0.0 ? std::min(1.0, got / ideal) : 1.0;
  }
  return curve;
}

double HierarchicalPrecisionAtK(const RankedList& r, const SimilarityMatrix& s,
                                std::size_t k) {
  return HierarchicalPrecisionCurve(r, s, k).back();
}

double AverageHierarchicalPrecision(const RankedList& r,
                                    const SimilarityMatrix& s, std::size_t K) {
  const std::vector<double> curve = HierarchicalPrecisionCurve(r, s, K);
  double sum = 0.0;
  for (double hp : curve) sum += hp;
  return sum / static_cast<double>(K);
}

MahpResult MeanAverageHierarchicalPrecision(std::span<const RankedList> queries,
                                            const SimilarityMatrix& s,
                                            std::size_t K) {
  if (queries.empty()) throw Error("no queries to evaluate");
  if (K == 0) throw Error("cutoff K must be >= 1");
  MahpResult out;
  double sum = 0.0;
  for (const RankedList& r : queries) {
    std::size_t k = K;
    if (r.size() < K) {
      k = r.size();
      ++out.clipped_queries;
    }
    sum += AverageHierarchicalPrecision(r, s, k);
  }
  out.value = sum / static_cast<double>(queries.size());
  return out;
}

double PrecisionAtK(const RankedList& r, std::size_t k) {
  if (k < 1 || k > r.size()) {
    throw Error("cutoff " + std::to_string(k) + " outside [1, " +
                std::to_string(r.size()) + "]");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) {
    hits += r.entries[i].label == r.query_label;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

double AveragePrecision(const RankedList& r) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.entries[i].label == r.query_label) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

MapResult MeanAveragePrecision(std::span<const RankedList> queries) {
  if (queries.empty()) throw Error("no queries to evaluate");
  MapResult out;
  double sum = 0.0;
  for (const RankedList& r : queries) {
    const double ap = AveragePrecision(r);
    if (ap == 0.0) {
      const bool any = std::any_of(
          r.entries.begin(), r.entries.end(),
          [&](const RankedEntry& e) { return e.label == r.query_label; });
      if (!any) ++out.queries_without_relevant;
    }
    sum += ap;
  }
  out.value = sum / static_cast<double>(queries.size());
  return out;
}

BalancedAccuracyResult BalancedAccuracy(
    std::span<const std::pair<std::size_t, std::size_t>> predictions,
    std::size_t num_classes) {
  if (predictions.empty()) throw Error("no predictions");
  std::vector<std::size_t> total(num_classes, 0), correct(num_classes, 0);
  for (auto [truth, predicted] : predictions) {
    if (truth >= num_classes || predicted >= num_classes) {
      throw Error("label out of range in predictions");
    }
    ++total[truth];
    correct[truth] += truth == predicted;
  }
  BalancedAccuracyResult out;
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (total[c] == 0) {
      ++out.absent_classes;
      continue;
    }
    ++present;
    sum += static_cast<double>(correct[c]) / static_cast<double>(total[c]);
  }
  out.value = sum / static_cast<double>(present);
  return out;
}

}  // namespace hierembed
