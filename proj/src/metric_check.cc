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

#include "hierembed/metric_check.h"

#include <cstdint>
#include <cstdio>

#include "hierembed/similarity.h"

namespace hierembed {

std::string_view AxiomName(Axiom axiom) {
  switch (axiom) {
    case Axiom::kNonNegativity:
      return "non_negativity";
    case Axiom::kSymmetry:
      return "symmetry";
    case Axiom::kIdentityOfIndiscernibles:
      return "identity_of_indiscernibles";
    case Axiom::kTriangleInequality:
      return "triangle_inequality";
  }
  return "unknown";
}

MetricReport CheckMetric(const Taxonomy& taxonomy, Execution execution) {
  MetricReport report;
  report.is_tree = taxonomy.IsTree();
  report.classes_are_leaves = taxonomy.ClassesAreLeaves();

  const auto names = taxonomy.class_names();
  const std::int64_t n = static_cast<std::int64_t>(names.size());
  const double height = taxonomy.max_height();
  const std::vector<int> h = LcsHeightMatrix(taxonomy, execution);
  auto at = [&](std::int64_t i, std::int64_t j) { return h[i * n + j]; };
  auto d = [&](std::int64_t i, std::int64_t j) { return at(i, j) / height; };

  auto& out = report.violations;
  for (std::int64_t i = 0; i < n; ++i) {
    if (at(i, i) != 0) {
      out.push_back({Axiom::kIdentityOfIndiscernibles, {names[i]}, d(i, i), 0.0});
    }
    for (std::int64_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (at(i, j) < 0) {
        out.push_back({Axiom::kNonNegativity, {names[i], names[j]}, d(i, j), 0.0});
      }
      if (i < j && at(i, j) != at(j, i)) {
        out.push_back({Axiom::kSymmetry, {names[i], names[j]}, d(i, j), d(j, i)});
      }
      if (i < j && at(i, j) == 0) {
        out.push_back({Axiom::kIdentityOfIndiscernibles,
                       {names[i], names[j]}, d(i, j), 0.0});
      }
    }
  }

  // Triangle inequality d(u, w) <= d(u, v) + d(v, w) on integer heights.
  // Unordered outer pairs suffice because symmetry is checked above.
  std::vector<std::vector<MetricViolation>> per_u(n);
  auto check_u = [&](std::int64_t u) {
    for (std::int64_t w = u + 1; w < n; ++w) {
      const int lhs = at(u, w);
      for (std::int64_t v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        if (lhs > at(u, v) + at(v, w)) {
          per_u[u].push_back({Axiom::kTriangleInequality,
                              {names[u], names[v], names[w]},
                              d(u, w), d(u, v) + d(v, w)});
        }
      }
    }
  };
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t u = 0; u < n; ++u) check_u(u);
  } else {
    for (std::int64_t u = 0; u < n; ++u) check_u(u);
  }
  for (auto& part : per_u) {
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return report;
}

std::string FormatMetricReport(const MetricReport& report) {
  std::string out;
  out += std::string("tree: ") + (report.is_tree ? "yes" : "no") + "\n";
  out += std::string("classes_are_leaves: ") +
         (report.classes_are_leaves ? "yes" : "no") + "\n";
  out += "violations: " + std::to_string(report.violations.size()) + "\n";
  char buf[96];
  for (const auto& v : report.violations) {
    out += AxiomName(v.axiom);
    for (const auto& w : v.witnesses) {
      out += ' ';
      out += w;
    }
    std::snprintf(buf, sizeof(buf), " lhs=%.17g rhs=%.17g\n", v.lhs, v.rhs);
    out += buf;
  }
  if (report.ok()) {
    out += "metric: OK\n";
  } else {
    out += "metric: VIOLATED (" + std::to_string(report.violations.size()) + ")\n";
  }
  return out;
}

}  // namespace hierembed
