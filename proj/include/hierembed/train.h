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

#ifndef HIEREMBED_TRAIN_H_
#define HIEREMBED_TRAIN_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "hierembed/embedding.h"
#include "hierembed/mapper.h"

namespace hierembed {

enum class Schedule { kConstant, kCosine, kCosineWithRestarts };

std::string_view ScheduleName(Schedule schedule);
// "constant", "cosine", "sgdr".
Schedule ParseSchedule(std::string_view name);

struct TrainConfig {
  int epochs = 100;
  std::size_t batch_size = 32;
  double base_lr = 0.1;
  double min_lr = 1e-6;
  Schedule schedule = Schedule::kCosine;
  // Restart schedule: first cycle length in epochs and growth factor.
  int cycle_len = 12;
  double cycle_multiplier = 2.0;
  double lambda = 0.1;
  std::uint64_t seed = 42;
  LossMode loss_mode = LossMode::kCorr;
  // Gradient norm clipping; <= 0 disables.
  double clip_norm = 10.0;
  Execution execution = Execution::kParallel;

  // Throws Error on invalid settings.
  void Validate() const;
};

// Learning rate used throughout epoch `epoch` (0-based).
double LearningRate(const TrainConfig& config, int epoch);

struct EpochLog {
  int epoch = 0;  // 1-based
  double lr = 0.0;
  LossBreakdown loss;  // over the full dataset after the epoch's updates
};

struct TrainResult {
  MapperModel model;
  std::vector<EpochLog> history;
};

// Mini-batch SGD (no momentum) from a seeded initialization; the dataset
// order is reshuffled every epoch from the same seeded stream. Throws
// NumericalError if the loss becomes non-finite.
TrainResult Train(const FeatureDataset& dataset, const EmbeddingMatrix& phi,
                  const TrainConfig& config);

}  // namespace hierembed

#endif  // HIEREMBED_TRAIN_H_
