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

#include "hierembed/evaluate.h"

#include <cstdint>
#include <cstdio>
#include <exception>

#include "hierembed/errors.h"

namespace hierembed {

EvalReport EvaluateRetrieval(const LabeledVectors& items,
                             const SimilarityMatrix& s,
                             const EvalOptions& options) {
  items.Validate();
  const std::size_t n = items.size();
  if (n < 2) throw Error("leave-one-out evaluation needs at least two items");
  if (options.K == 0) throw Error("cutoff K must be >= 1");
  for (std::size_t label : items.labels) {
    if (label >= s.size()) throw Error("item label outside the class set");
  }

  EvalReport report;
  report.num_queries = n;
  report.K = options.K;
  const std::size_t m = n - 1;
  report.K_effective = std::min(options.K, m);
  if (report.K_effective < options.K) {
    report.warnings.push_back("K=" + std::to_string(options.K) +
                              " exceeds the " + std::to_string(m) +
                              " database items per query; clipped to " +
                              std::to_string(m));
  }
  std::vector<std::size_t> cutoffs;
  for (std::size_t k : options.precision_cutoffs) {
    if (k >= 1 && k <= m) cutoffs.push_back(k);
  }

  const std::size_t kk = report.K_effective;
  std::vector<double> curves(n * kk);
  std::vector<double> ap(n);
  std::vector<double> precisions(n * cutoffs.size());
  auto run_query = [&](std::size_t q) {
    const RankedList r = Rank(items.vectors.row(q), items.labels[q], items, q);
    const auto curve = HierarchicalPrecisionCurve(r, s, kk);
    std::copy(curve.begin(), curve.end(), curves.begin() + q * kk);
    ap[q] = AveragePrecision(r);
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      precisions[q * cutoffs.size() + c] = PrecisionAtK(r, cutoffs[c]);
    }
  };
  const std::int64_t count = static_cast<std::int64_t>(n);
  if (options.execution == Execution::kParallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t q = 0; q < count; ++q) {
      try {
        run_query(static_cast<std::size_t>(q));
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::int64_t q = 0; q < count; ++q) run_query(static_cast<std::size_t>(q));
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  report.hp_curve.assign(kk, 0.0);
  double ahp_sum = 0.0;
  double ap_sum = 0.0;
  std::size_t without_relevant = 0;
  std::vector<double> p_sums(cutoffs.size(), 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    double query_ahp = 0.0;
    for (std::size_t k = 0; k < kk; ++k) {
      report.hp_curve[k] += curves[q * kk + k];
      query_ahp += curves[q * kk + k];
    }
    ahp_sum += query_ahp / static_cast<double>(kk);
    ap_sum += ap[q];
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      p_sums[c] += precisions[q * cutoffs.size() + c];
    }
  }
  for (double& hp : report.hp_curve) hp *= inv_n;
  report.mahp = ahp_sum * inv_n;
  report.map = ap_sum * inv_n;
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    report.p_at_k.emplace_back(cutoffs[c], p_sums[c] * inv_n);
  }

  std::vector<std::size_t> per_class(s.size(), 0);
  for (std::size_t label : items.labels) ++per_class[label];
  for (std::size_t q = 0; q < n; ++q) {
    if (per_class[items.labels[q]] < 2) ++without_relevant;
  }
  if (without_relevant > 0) {
    report.warnings.push_back(std::to_string(without_relevant) +
                              " queries have no relevant item; their AP is 0");
  }
  return report;
}

std::string FormatHpCurveCsv(const EvalReport& report) {
  std::string out = "k,hp\n";
  char buf[64];
  for (std::size_t k = 0; k < report.hp_curve.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k + 1, report.hp_curve[k]);
    out += buf;
  }
  return out;
}

std::string FormatEvalSummary(const EvalReport& report) {
  std::string out;
  char buf[128];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
  };
  line("queries: %zu\n", report.num_queries);
  line("K: %zu\n", report.K_effective);
  line("mAHP@%zu: %.17g\n", report.K_effective, report.mahp);
  line("mAP: %.17g\n", report.map);
  for (const auto& [k, p] : report.p_at_k) line("P@%zu: %.17g\n", k, p);
  if (report.balanced_accuracy) {
    line("balanced_accuracy: %.17g\n", *report.balanced_accuracy);
  }
  for (const auto& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace hierembed
