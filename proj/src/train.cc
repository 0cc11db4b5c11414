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

#include "hierembed/train.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hierembed/errors.h"
#include "hierembed/random.h"

namespace hierembed {

std::string_view ScheduleName(Schedule schedule) {
  switch (schedule) {
    case Schedule::kConstant:
      return "constant";
    case Schedule::kCosine:
      return "cosine";
    case Schedule::kCosineWithRestarts:
      return "sgdr";
  }
  return "constant";
}

Schedule ParseSchedule(std::string_view name) {
  if (name == "constant") return Schedule::kConstant;
  if (name == "cosine") return Schedule::kCosine;
  if (name == "sgdr") return Schedule::kCosineWithRestarts;
  throw Error("unknown schedule '" + std::string(name) +
              "' (expected constant, cosine or sgdr)");
}

void TrainConfig::Validate() const {
  if (epochs < 0) throw Error("epochs must be >= 0");
  if (batch_size < 1) throw Error("batch size must be >= 1");
  if (!(base_lr > 0.0)) throw Error("base learning rate must be > 0");
  if (min_lr < 0.0 || min_lr > base_lr) {
    throw Error("min learning rate must lie in [0, base_lr]");
  }
  if (!(lambda >= 0.0)) throw Error("lambda must be >= 0");
  if (schedule == Schedule::kCosineWithRestarts &&
      (cycle_len < 1 || !(cycle_multiplier >= 1.0))) {
    throw Error("restart schedule needs cycle_len >= 1 and multiplier >= 1");
  }
}

double LearningRate(const TrainConfig& config, int epoch) {
  auto cosine = [&](double t, double period) {
    return config.min_lr + 0.5 * (config.base_lr - config.min_lr) *
                               (1.0 + std::cos(std::numbers::pi * t / period));
  };
  switch (config.schedule) {
    case Schedule::kConstant:
      return config.base_lr;
    case Schedule::kCosine:
      return cosine(epoch, std::max(config.epochs, 1));
    case Schedule::kCosineWithRestarts: {
      double period = config.cycle_len;
      double t = epoch;
      while (t >= period) {
        t -= period;
        period = std::round(period * config.cycle_multiplier);
      }
      return cosine(t, period);
    }
  }
  return config.base_lr;
}

TrainResult Train(const FeatureDataset& dataset, const EmbeddingMatrix& phi,
                  const TrainConfig& config) {
  config.Validate();
  dataset.Validate();
  if (dataset.samples.empty()) throw Error("training dataset is empty");
  if (dataset.num_classes != phi.num_classes()) {
    throw Error("dataset has " + std::to_string(dataset.num_classes) +
                " classes, embeddings have " + std::to_string(phi.num_classes()));
  }

  TrainResult result;
  result.model = InitializeModel(dataset.input_dim, phi.dim(),
                                 NeedsHead(config.loss_mode) ? phi.num_classes() : 0,
                                 config.seed);
  Rng shuffle_rng(config.seed ^ 0x5DEECE66Dull);
  std::vector<std::size_t> order(dataset.samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Sample> batch;
  std::vector<double> params = result.model.Parameters();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = LearningRate(config, epoch);
    shuffle_rng.Shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(dataset.samples[order[i]]);
      }
      GradientResult g = ComputeGradients(batch, result.model, phi,
                                          config.loss_mode, config.lambda,
                                          config.execution);
      const double norm = std::sqrt(Dot(g.gradient, g.gradient));
      if (!std::isfinite(norm) || !std::isfinite(g.loss.total)) {
        throw NumericalError("training diverged at epoch " +
                             std::to_string(epoch + 1) + " (non-finite gradient)");
      }
      double scale = lr;
      if (config.clip_norm > 0.0 && norm > config.clip_norm) {
        scale *= config.clip_norm / norm;
      }
      for (std::size_t k = 0; k < params.size(); ++k) {
        params[k] -= scale * g.gradient[k];
      }
      result.model.SetParameters(params);
    }
    EpochLog log{epoch + 1, lr,
                 EvaluateLoss(dataset.samples, result.model, phi,
                              config.loss_mode, config.lambda, config.execution)};
    if (!std::isfinite(log.loss.total)) {
      throw NumericalError("training diverged at epoch " +
                           std::to_string(epoch + 1) + " (non-finite loss)");
    }
    result.history.push_back(log);
  }
  return result;
}

}  // namespace hierembed
