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

// Linear feature -> embedding mapper with L2 output normalization and an
// optional softmax classification head on top of the normalized embedding.

#ifndef HIEREMBED_MAPPER_H_
#define HIEREMBED_MAPPER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hierembed/embedding.h"
#include "hierembed/matrix.h"

namespace hierembed {

struct Sample {
  std::vector<double> features;
  std::size_t label = 0;  // 0-based class index
};

struct FeatureDataset {
  std::size_t input_dim = 0;
  std::size_t num_classes = 0;
  std::vector<Sample> samples;
  std::vector<std::string> class_names;  // optional, index -> identifier

  // Throws Error on ragged features or out-of-range labels.
  void Validate() const;
};

enum class LossMode {
  kCorr,         // 1 - psi(x) . phi(y)
  kCorrPlusCls,  // corr + lambda * cross-entropy
  kCls,          // cross-entropy only (softmax baseline)
};

std::string_view LossModeName(LossMode mode);
// Accepts "corr", "corr+cls", "cls". Throws Error otherwise.
LossMode ParseLossMode(std::string_view name);
inline bool NeedsHead(LossMode mode) { return mode != LossMode::kCorr; }

struct ClassifierHead {
  Matrix weights;  // n x d
  std::vector<double> bias;
  friend bool operator==(const ClassifierHead&, const ClassifierHead&) = default;
};

struct MapperModel {
  Matrix weights;  // d x p
  std::vector<double> bias;
  std::optional<ClassifierHead> head;

  std::size_t input_dim() const { return weights.cols(); }
  std::size_t embed_dim() const { return weights.rows(); }
  std::size_t num_head_classes() const {
    return head ? head->weights.rows() : 0;
  }

  // Flattened as W, b, then head weights and head bias if present.
  std::size_t num_parameters() const;
  std::vector<double> Parameters() const;
  void SetParameters(std::span<const double> params);

  friend bool operator==(const MapperModel&, const MapperModel&) = default;
};

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]: fan_in = p for the mapper,
// d for the head. `num_classes` = 0 means no head.
MapperModel InitializeModel(std::size_t input_dim, std::size_t embed_dim,
                            std::size_t num_classes, std::uint64_t seed);

inline constexpr double kMinNorm = 1e-12;

// Throws NumericalError if ||v|| <= kMinNorm.
std::vector<double> L2Normalize(std::span<const double> v);

// W x + b.
std::vector<double> PreNormalize(const MapperModel& model,
                                 std::span<const double> x);
// l2_normalize(W x + b).
std::vector<double> Embed(const MapperModel& model, std::span<const double> x);
// Softmax of the head logits on Embed(x). Throws Error without a head.
std::vector<double> ClassProbabilities(const MapperModel& model,
                                       std::span<const double> x);

struct LossBreakdown {
  double corr = 0.0;
  double cls = 0.0;  // 0 when the model has no head
  double total = 0.0;
};

double LossCorr(std::span<const Sample> batch, const MapperModel& model,
                const EmbeddingMatrix& phi);
double LossCls(std::span<const Sample> batch, const MapperModel& model);
double LossCombined(std::span<const Sample> batch, const MapperModel& model,
                    const EmbeddingMatrix& phi, double lambda);
LossBreakdown EvaluateLoss(std::span<const Sample> batch,
                           const MapperModel& model, const EmbeddingMatrix& phi,
                           LossMode mode, double lambda,
                           Execution execution = Execution::kParallel);

struct GradientResult {
  LossBreakdown loss;
  std::vector<double> gradient;  // same layout as MapperModel::Parameters()
};

// Exact gradient of the configured loss. Per-sample terms are combined by a
// fixed pairwise tree, so serial and parallel execution agree bitwise.
GradientResult ComputeGradients(std::span<const Sample> batch,
                                const MapperModel& model,
                                const EmbeddingMatrix& phi, LossMode mode,
                                double lambda,
                                Execution execution = Execution::kParallel);

// argmax_i psi(x) . phi_i, smallest index on ties.
std::size_t ClassifyNearestCentroid(const MapperModel& model,
                                    const EmbeddingMatrix& phi,
                                    std::span<const double> x);
// argmax of the head's logits, smallest index on ties.
std::size_t ClassifySoftmax(const MapperModel& model, std::span<const double> x);

}  // namespace hierembed

#endif  // HIEREMBED_MAPPER_H_
