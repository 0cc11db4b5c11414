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

#include "hierembed/experiment.h"

#include <cstdio>
#include <functional>
#include <utility>

#include "hierembed/embedding.h"
#include "hierembed/similarity.h"
#include "hierembed/taxonomy.h"

namespace hierembed {
namespace {

using Transform = std::function<std::vector<double>(std::span<const double>)>;

LabeledVectors BuildItems(const FeatureDataset& data, std::size_t dim,
                          const Transform& transform) {
  LabeledVectors items;
  items.vectors = Matrix(data.samples.size(), dim);
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    items.ids.push_back(static_cast<std::int64_t>(i));
    items.labels.push_back(data.samples[i].label);
    const auto v = transform(data.samples[i].features);
    std::copy(v.begin(), v.end(), items.vectors.row(i).begin());
  }
  return items;
}

void Score(MethodResult& result, const LabeledVectors& items,
           const SimilarityMatrix& s, const ExperimentOptions& options,
           std::size_t* k_effective) {
  EvalOptions eval;
  eval.K = options.K;
  eval.execution = options.execution;
  const EvalReport report = EvaluateRetrieval(items, s, eval);
  result.mahp = report.mahp;
  result.map = report.map;
  *k_effective = report.K_effective;
}

void Classify(MethodResult& result, const FeatureDataset& test,
              std::size_t num_classes,
              const std::function<std::size_t(std::span<const double>)>& f) {
  std::vector<std::pair<std::size_t, std::size_t>> predictions;
  std::size_t correct = 0;
  for (const Sample& sample : test.samples) {
    const std::size_t predicted = f(sample.features);
    predictions.emplace_back(sample.label, predicted);
    if (predicted == sample.label) ++correct;
  }
  result.accuracy = static_cast<double>(correct) /
                    static_cast<double>(test.samples.size());
  result.balanced_accuracy = BalancedAccuracy(predictions, num_classes).value;
}

}  // namespace

TrainConfig ExperimentOptions::DefaultExperimentTrainConfig() {
  TrainConfig config;
  config.epochs = 100;
  config.batch_size = 32;
  config.base_lr = 2.0;
  config.min_lr = 1e-4;
  config.schedule = Schedule::kCosine;
  return config;
}

ExperimentResult RunSyntheticExperiment(const ExperimentOptions& options) {
  const Taxonomy taxonomy = RandomTree(options.num_classes, options.seed);
  const SimilarityMatrix s = ComputeSimilarityMatrix(taxonomy, options.execution);
  const EmbeddingMatrix phi = ComputeEmbeddings(s);

  SyntheticOptions synth;
  synth.samples_per_class = options.samples_per_class;
  synth.noise_sigma = options.noise_sigma;
  synth.input_dim = options.input_dim;
  synth.seed = options.seed;
  synth.stream = 0;
  const FeatureDataset train = GenerateSyntheticDataset(phi, synth);
  synth.stream = 1;
  const FeatureDataset test = GenerateSyntheticDataset(phi, synth);

  ExperimentResult result;
  result.num_classes = taxonomy.num_classes();
  result.hierarchy_height = static_cast<std::size_t>(taxonomy.max_height());
  const std::size_t n = phi.num_classes();
  const std::size_t d = phi.dim();

  auto train_with = [&](LossMode mode) {
    TrainConfig config = options.train;
    config.loss_mode = mode;
    config.execution = options.execution;
    return Train(train, phi, config);
  };

  result.raw.name = "raw features";
  Score(result.raw,
        BuildItems(test, options.input_dim,
                   [](std::span<const double> x) { return L2Normalize(x); }),
        s, options, &result.K_effective);

  const TrainResult softmax = train_with(LossMode::kCls);
  result.softmax.name = "softmax only";
  Score(result.softmax,
        BuildItems(test, d,
                   [&](std::span<const double> x) {
                     return Embed(softmax.model, x);
                   }),
        s, options, &result.K_effective);
  Classify(result.softmax, test, n, [&](std::span<const double> x) {
    return ClassifySoftmax(softmax.model, x);
  });

  const TrainResult corr = train_with(LossMode::kCorr);
  result.corr.name = "L_CORR";
  result.corr.final_loss_corr = corr.history.back().loss.corr;
  Score(result.corr,
        BuildItems(test, d,
                   [&](std::span<const double> x) {
                     return Embed(corr.model, x);
                   }),
        s, options, &result.K_effective);
  Classify(result.corr, test, n, [&](std::span<const double> x) {
    return ClassifyNearestCentroid(corr.model, phi, x);
  });

  const TrainResult corr_cls = train_with(LossMode::kCorrPlusCls);
  result.corr_cls.name = "L_CORR+CLS";
  result.corr_cls.final_loss_corr = corr_cls.history.back().loss.corr;
  Score(result.corr_cls,
        BuildItems(test, d,
                   [&](std::span<const double> x) {
                     return Embed(corr_cls.model, x);
                   }),
        s, options, &result.K_effective);
  Classify(result.corr_cls, test, n, [&](std::span<const double> x) {
    return ClassifySoftmax(corr_cls.model, x);
  });
  return result;
}

std::string FormatExperimentTable(const ExperimentResult& result) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "classes: %zu  height: %zu  K: %zu\n",
                result.num_classes, result.hierarchy_height,
                result.K_effective);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %10s %10s\n", "method",
                "mAHP@K", "mAP", "accuracy", "bal_acc");
  out += buf;
  auto cell = [](const std::optional<double>& v) {
    char c[32];
    if (v) {
      std::snprintf(c, sizeof(c), "%.4g", *v);
    } else {
      std::snprintf(c, sizeof(c), "-");
    }
    return std::string(c);
  };
  for (const MethodResult* m :
       {&result.raw, &result.softmax, &result.corr, &result.corr_cls}) {
    std::snprintf(buf, sizeof(buf), "%-14s %10.4g %10.4g %10s %10s\n",
                  m->name.c_str(), m->mahp, m->map, cell(m->accuracy).c_str(),
                  cell(m->balanced_accuracy).c_str());
    out += buf;
  }
  return out;
}

}  // namespace hierembed
