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

#ifndef HIEREMBED_METRIC_CHECK_H_
#define HIEREMBED_METRIC_CHECK_H_

#include <string>
#include <string_view>
#include <vector>

#include "hierembed/matrix.h"
#include "hierembed/taxonomy.h"

namespace hierembed {

enum class Axiom {
  kNonNegativity,
  kSymmetry,
  kIdentityOfIndiscernibles,
  kTriangleInequality,
};

std::string_view AxiomName(Axiom axiom);

// One failed axiom instance. For the triangle inequality the witnesses are
// (u, v, w) with lhs = d(u, w) and rhs = d(u, v) + d(v, w). For the pairwise
// axioms the witnesses are (u, v) or (u); lhs/rhs are the two sides of the
// failed relation (e.g. d(u, v) and d(v, u) for symmetry).
struct MetricViolation {
  Axiom axiom;
  std::vector<std::string> witnesses;
  double lhs;
  double rhs;
};

struct MetricReport {
  bool is_tree = false;
  bool classes_are_leaves = false;
  std::vector<MetricViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks the structural conditions that guarantee the LCS-height
// dissimilarity is a metric, then exhaustively tests all four axioms over
// every class pair and ordered triple. Comparisons run on integer LCS
// heights, so the outcome is exact.
MetricReport CheckMetric(const Taxonomy& taxonomy,
                         Execution execution = Execution::kParallel);

// One line per violation: "<axiom> <witnesses...> lhs=<x> rhs=<y>", preceded
// by the structural conditions and followed by "metric: OK" or
// "metric: VIOLATED (<count>)".
std::string FormatMetricReport(const MetricReport& report);

}  // namespace hierembed

#endif  // HIEREMBED_METRIC_CHECK_H_
