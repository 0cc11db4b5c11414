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

// End-to-end synthetic benchmark: random taxonomy -> exact class embeddings
// -> synthetic features -> trained mappers -> leave-one-out retrieval on a
// held-out split. Compares raw features, a softmax-only classifier, and the
// two embedding losses.

#ifndef HIEREMBED_EXPERIMENT_H_
#define HIEREMBED_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hierembed/evaluate.h"
#include "hierembed/mapper.h"
#include "hierembed/synthetic.h"
#include "hierembed/train.h"

namespace hierembed {

struct ExperimentOptions {
  std::uint64_t seed = 42;
  std::size_t num_classes = 20;
  std::size_t samples_per_class = 50;
  std::size_t input_dim = 32;
  double noise_sigma = 0.15;
  std::size_t K = 250;
  // Shared by all trained methods except loss_mode and lambda.
  TrainConfig train = DefaultExperimentTrainConfig();
  Execution execution = Execution::kParallel;

  static TrainConfig DefaultExperimentTrainConfig();
};

struct MethodResult {
  std::string name;
  double mahp = 0.0;
  double map = 0.0;
  std::optional<double> accuracy;           // held-out, plain accuracy
  std::optional<double> balanced_accuracy;  // held-out
  std::optional<double> final_loss_corr;    // training set, last epoch
};

struct ExperimentResult {
  std::size_t num_classes = 0;
  std::size_t hierarchy_height = 0;
  std::size_t K_effective = 0;
  MethodResult raw;       // L2-normalized input features
  MethodResult softmax;   // pre-logit features of a cross-entropy model
  MethodResult corr;      // L_CORR mapper, nearest-centroid accuracy
  MethodResult corr_cls;  // L_CORR + lambda L_CLS mapper, softmax accuracy
};

ExperimentResult RunSyntheticExperiment(const ExperimentOptions& options);

// Fixed-width comparison table, 4 significant digits.
std::string FormatExperimentTable(const ExperimentResult& result);

}  // namespace hierembed

#endif  // HIEREMBED_EXPERIMENT_H_
