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

// Serial reference vs OpenMP kernels. Second argument: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "hierembed/embedding.h"
#include "hierembed/evaluate.h"
#include "hierembed/mapper.h"
#include "hierembed/metric_check.h"
#include "hierembed/similarity.h"
#include "hierembed/synthetic.h"
#include "hierembed/taxonomy.h"

namespace hierembed {
namespace {

Execution Mode(const benchmark::State& state) {
  return state.range(1) ? Execution::kParallel : Execution::kSerial;
}

void BM_SimilarityMatrix(benchmark::State& state) {
  const Taxonomy t = RandomTree(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeSimilarityMatrix(t, Mode(state)));
  }
}
BENCHMARK(BM_SimilarityMatrix)->ArgsProduct({{200, 1000}, {0, 1}});

void BM_CheckMetric(benchmark::State& state) {
  const Taxonomy t = RandomTree(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(CheckMetric(t, Mode(state)));
}
BENCHMARK(BM_CheckMetric)->ArgsProduct({{50, 150}, {0, 1}});

void BM_ReconstructionError(benchmark::State& state) {
  const SimilarityMatrix s = ComputeSimilarityMatrix(RandomTree(state.range(0), 3));
  const EmbeddingMatrix phi = ComputeEmbeddings(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ReconstructionError(phi, s, Mode(state)));
  }
}
BENCHMARK(BM_ReconstructionError)->ArgsProduct({{500}, {0, 1}});

void BM_Gradients(benchmark::State& state) {
  const EmbeddingMatrix phi =
      ComputeEmbeddings(ComputeSimilarityMatrix(RandomTree(20, 4)));
  SyntheticOptions o;
  o.samples_per_class = state.range(0) / 20;
  const FeatureDataset data = GenerateSyntheticDataset(phi, o);
  const MapperModel m = InitializeModel(o.input_dim, phi.dim(), phi.num_classes(), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeGradients(data.samples, m, phi,
                                              LossMode::kCorrPlusCls, 0.1,
                                              Mode(state)));
  }
}
BENCHMARK(BM_Gradients)->ArgsProduct({{1000}, {0, 1}});

void BM_EvaluateRetrieval(benchmark::State& state) {
  const Taxonomy t = RandomTree(20, 6);
  const SimilarityMatrix s = ComputeSimilarityMatrix(t);
  const EmbeddingMatrix phi = ComputeEmbeddings(s);
  SyntheticOptions o;
  o.samples_per_class = state.range(0) / 20;
  const FeatureDataset data = GenerateSyntheticDataset(phi, o);
  LabeledVectors items;
  items.vectors = Matrix(data.samples.size(), o.input_dim);
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    items.ids.push_back(static_cast<std::int64_t>(i));
    items.labels.push_back(data.samples[i].label);
    const auto v = L2Normalize(data.samples[i].features);
    std::copy(v.begin(), v.end(), items.vectors.row(i).begin());
  }
  EvalOptions options;
  options.execution = Mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvaluateRetrieval(items, s, options));
  }
}
BENCHMARK(BM_EvaluateRetrieval)->ArgsProduct({{1000}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hierembed

BENCHMARK_MAIN();
