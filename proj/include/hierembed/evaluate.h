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

#ifndef HIEREMBED_EVALUATE_H_
#define HIEREMBED_EVALUATE_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hierembed/retrieval.h"

namespace hierembed {

struct EvalOptions {
  std::size_t K = 250;
  std::vector<std::size_t> precision_cutoffs = {1, 10, 50, 100, 250};
  Execution execution = Execution::kParallel;
};

struct EvalReport {
  std::size_t num_queries = 0;
  std::size_t K = 0;            // requested cutoff
  std::size_t K_effective = 0;  // after clipping to the database size
  std::vector<double> hp_curve;  // mean HP@k over queries, k = 1..K_effective
  double mahp = 0.0;
  double map = 0.0;
  std::vector<std::pair<std::size_t, double>> p_at_k;  // mean P@k
  std::optional<double> balanced_accuracy;
  std::vector<std::string> warnings;
};

// Leave-one-out retrieval: every item queries all other items by dot
// product. Queries run in parallel; all aggregation sums in query order.
EvalReport EvaluateRetrieval(const LabeledVectors& items,
                             const SimilarityMatrix& s,
                             const EvalOptions& options = {});

// "k,hp" header then one row per cutoff, 17 significant digits.
std::string FormatHpCurveCsv(const EvalReport& report);
// key: value lines; machine-readable values at 17 significant digits.
std::string FormatEvalSummary(const EvalReport& report);

}  // namespace hierembed

#endif  // HIEREMBED_EVALUATE_H_
