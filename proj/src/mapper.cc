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

#include "hierembed/mapper.h"

#include <algorithm>
#include <cmath>
#include <exception>

#include "hierembed/errors.h"
#include "hierembed/random.h"
#include "hierembed/reduce.h"

namespace hierembed {

void FeatureDataset::Validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != input_dim) {
      throw Error("sample " + std::to_string(i) + " has " +
                  std::to_string(samples[i].features.size()) +
                  " features, expected " + std::to_string(input_dim));
    }
    if (samples[i].label >= num_classes) {
      throw Error("sample " + std::to_string(i) + " has label " +
                  std::to_string(samples[i].label) + " outside [0, " +
                  std::to_string(num_classes) + ")");
    }
    for (double x : samples[i].features) {
      if (!std::isfinite(x)) {
        throw Error("sample " + std::to_string(i) + " has a non-finite feature");
      }
    }
  }
  if (!class_names.empty() && class_names.size() != num_classes) {
    throw Error("dataset class name count does not match num_classes");
  }
}

std::string_view LossModeName(LossMode mode) {
  switch (mode) {
    case LossMode::kCorr:
      return "corr";
    case LossMode::kCorrPlusCls:
      return "corr+cls";
    case LossMode::kCls:
      return "cls";
  }
  return "corr";
}

LossMode ParseLossMode(std::string_view name) {
  if (name == "corr") return LossMode::kCorr;
  if (name == "corr+cls") return LossMode::kCorrPlusCls;
  if (name == "cls") return LossMode::kCls;
  throw Error("unknown loss mode '" + std::string(name) +
              "' (expected corr, corr+cls or cls)");
}

std::size_t MapperModel::num_parameters() const {
  std::size_t count = weights.data().size() + bias.size();
  if (head) count += head->weights.data().size() + head->bias.size();
  return count;
}

std::vector<double> MapperModel::Parameters() const {
  std::vector<double> out;
  out.reserve(num_parameters());
  out.insert(out.end(), weights.data().begin(), weights.data().end());
  out.insert(out.end(), bias.begin(), bias.end());
  if (head) {
    out.insert(out.end(), head->weights.data().begin(), head->weights.data().end());
    out.insert(out.end(), head->bias.begin(), head->bias.end());
  }
  return out;
}

void MapperModel::SetParameters(std::span<const double> params) {
  if (params.size() != num_parameters()) {
    throw Error("parameter vector has wrong length");
  }
  auto it = params.begin();
  auto take = [&](std::span<double> dst) {
    std::copy(it, it + dst.size(), dst.begin());
    it += dst.size();
  };
  take(weights.data());
  take(bias);
  if (head) {
    take(head->weights.data());
    take(head->bias);
  }
}

MapperModel InitializeModel(std::size_t input_dim, std::size_t embed_dim,
                            std::size_t num_classes, std::uint64_t seed) {
  if (input_dim == 0 || embed_dim == 0) {
    throw Error("mapper dimensions must be positive");
  }
  Rng rng(seed);
  MapperModel model;
  const double limit = 1.0 / std::sqrt(static_cast<double>(input_dim));
  model.weights = Matrix(embed_dim, input_dim);
  for (double& w : model.weights.data()) w = rng.Uniform(-limit, limit);
  model.bias.resize(embed_dim);
  for (double& b : model.bias) b = rng.Uniform(-limit, limit);
  if (num_classes > 0) {
    const double head_limit = 1.0 / std::sqrt(static_cast<double>(embed_dim));
    ClassifierHead head{Matrix(num_classes, embed_dim),
                        std::vector<double>(num_classes)};
    for (double& w : head.weights.data()) w = rng.Uniform(-head_limit, head_limit);
    for (double& b : head.bias) b = rng.Uniform(-head_limit, head_limit);
    model.head = std::move(head);
  }
  return model;
}

std::vector<double> L2Normalize(std::span<const double> v) {
  const double norm = std::sqrt(Dot(v, v));
  if (!(norm > kMinNorm)) {
    throw NumericalError("cannot L2-normalize a (near-)zero vector");
  }
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

std::vector<double> PreNormalize(const MapperModel& model,
                                 std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw Error("feature vector has dimension " + std::to_string(x.size()) +
                ", model expects " + std::to_string(model.input_dim()));
  }
  std::vector<double> z(model.embed_dim());
  for (std::size_t r = 0; r < z.size(); ++r) {
    z[r] = Dot(model.weights.row(r), x) + model.bias[r];
  }
  return z;
}

std::vector<double> Embed(const MapperModel& model, std::span<const double> x) {
  return L2Normalize(PreNormalize(model, x));
}

namespace {

std::vector<double> HeadLogits(const ClassifierHead& head,
                               std::span<const double> psi) {
  std::vector<double> logits(head.weights.rows());
  for (std::size_t c = 0; c < logits.size(); ++c) {
    logits[c] = Dot(head.weights.row(c), psi) + head.bias[c];
  }
  return logits;
}

// Softmax in place; returns log-sum-exp of the input.
double SoftmaxInPlace(std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    sum += l;
  }
  for (double& l : logits) l /= sum;
  return top + std::log(sum);
}

const ClassifierHead& RequireHead(const MapperModel& model) {
  if (!model.head) throw Error("model has no classifier head");
  return *model.head;
}

double ClsWeight(LossMode mode, double lambda) {
  switch (mode) {
    case LossMode::kCorr:
      return 0.0;
    case LossMode::kCorrPlusCls:
      return lambda;
    case LossMode::kCls:
      return 1.0;
  }
  return 0.0;
}

void CheckCompatible(const MapperModel& model, const EmbeddingMatrix& phi) {
  if (model.embed_dim() != phi.dim()) {
    throw Error("model embeds into " + std::to_string(model.embed_dim()) +
                " dimensions, class embeddings have " +
                std::to_string(phi.dim()));
  }
}

void CheckLabel(const Sample& sample, std::size_t num_classes) {
  if (sample.label >= num_classes) {
    throw Error("label " + std::to_string(sample.label) + " out of range [0, " +
                std::to_string(num_classes) + ")");
  }
}

struct SampleLoss {
  double corr = 0.0;
  double cls = 0.0;
};

// Loss terms of one sample. When `grad` is non-empty, also writes the
// unscaled gradient of corr_weight * corr + cls_weight * cls into it.
SampleLoss SampleTerms(const MapperModel& model, const EmbeddingMatrix& phi,
                       const Sample& sample, double corr_weight,
                       double cls_weight, std::span<double> grad) {
  CheckLabel(sample, phi.num_classes());
  const std::size_t d = model.embed_dim();
  const std::size_t p = model.input_dim();
  const std::vector<double> z = PreNormalize(model, sample.features);
  const double norm = std::sqrt(Dot(z, z));
  if (!(norm > kMinNorm)) {
    throw NumericalError("mapper output is zero before normalization");
  }
  std::vector<double> psi(z);
  for (double& v : psi) v /= norm;

  SampleLoss loss;
  const auto target = phi.row(sample.label);
  loss.corr = 1.0 - Dot(psi, target);

  std::vector<double> g_psi;
  if (!grad.empty()) {
    g_psi.assign(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) g_psi[k] = -corr_weight * target[k];
  }

  if (model.head) {
    const ClassifierHead& head = *model.head;
    CheckLabel(sample, head.weights.rows());
    std::vector<double> probs = HeadLogits(head, psi);
    const double logit_y = probs[sample.label];
    const double log_z = SoftmaxInPlace(probs);
    loss.cls = log_z - logit_y;
    if (!grad.empty() && cls_weight != 0.0) {
      const std::size_t n = head.weights.rows();
      double* g_head_w = grad.data() + d * p + d;
      double* g_head_b = g_head_w + n * d;
      for (std::size_t c = 0; c < n; ++c) {
        const double g_logit =
            cls_weight * (probs[c] - (c == sample.label ? 1.0 : 0.0));
        g_head_b[c] = g_logit;
        for (std::size_t k = 0; k < d; ++k) {
          g_head_w[c * d + k] = g_logit * psi[k];
          g_psi[k] += g_logit * head.weights(c, k);
        }
      }
    }
  }

  if (!grad.empty()) {
    // Jacobian of z / |z| is (I - psi psi^T) / |z|.
    const double radial = Dot(psi, g_psi);
    double* g_w = grad.data();
    double* g_b = g_w + d * p;
    for (std::size_t r = 0; r < d; ++r) {
      const double g_z = (g_psi[r] - psi[r] * radial) / norm;
      g_b[r] = g_z;
      for (std::size_t c = 0; c < p; ++c) g_w[r * p + c] = g_z * sample.features[c];
    }
  }
  return loss;
}

template <typename Fn>
void ForEachSample(std::size_t m, Execution execution, Fn&& fn) {
  const std::int64_t count = static_cast<std::int64_t>(m);
  if (execution == Execution::kParallel) {
    // Exceptions must not escape the parallel region.
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < count; ++b) {
      try {
        fn(static_cast<std::size_t>(b));
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::int64_t b = 0; b < count; ++b) fn(static_cast<std::size_t>(b));
  }
}

LossBreakdown Combine(std::vector<double>& corr, std::vector<double>& cls,
                      bool has_head, LossMode mode, double lambda) {
  const double m = static_cast<double>(corr.size());
  LossBreakdown out;
  out.corr = PairwiseSum(corr) / m;
  out.cls = has_head ? PairwiseSum(cls) / m : 0.0;
  switch (mode) {
    case LossMode::kCorr:
      out.total = out.corr;
      break;
    case LossMode::kCorrPlusCls:
      out.total = out.corr + lambda * out.cls;
      break;
    case LossMode::kCls:
      out.total = out.cls;
      break;
  }
  return out;
}

void CheckBatch(std::span<const Sample> batch) {
  if (batch.empty()) throw Error("empty batch");
}

}  // namespace

std::vector<double> ClassProbabilities(const MapperModel& model,
                                       std::span<const double> x) {
  std::vector<double> probs = HeadLogits(RequireHead(model), Embed(model, x));
  SoftmaxInPlace(probs);
  return probs;
}

LossBreakdown EvaluateLoss(std::span<const Sample> batch,
                           const MapperModel& model, const EmbeddingMatrix& phi,
                           LossMode mode, double lambda, Execution execution) {
  CheckBatch(batch);
  CheckCompatible(model, phi);
  if (NeedsHead(mode)) RequireHead(model);
  std::vector<double> corr(batch.size()), cls(batch.size());
  ForEachSample(batch.size(), execution, [&](std::size_t b) {
    const SampleLoss l = SampleTerms(model, phi, batch[b], 0.0, 0.0, {});
    corr[b] = l.corr;
    cls[b] = l.cls;
  });
  return Combine(corr, cls, model.head.has_value(), mode, lambda);
}

double LossCorr(std::span<const Sample> batch, const MapperModel& model,
                const EmbeddingMatrix& phi) {
  return EvaluateLoss(batch, model, phi, LossMode::kCorr, 0.0).corr;
}

double LossCls(std::span<const Sample> batch, const MapperModel& model) {
  CheckBatch(batch);
  const ClassifierHead& head = RequireHead(model);
  std::vector<double> cls(batch.size());
  ForEachSample(batch.size(), Execution::kParallel, [&](std::size_t b) {
    CheckLabel(batch[b], head.weights.rows());
    std::vector<double> logits = HeadLogits(head, Embed(model, batch[b].features));
    const double logit_y = logits[batch[b].label];
    cls[b] = SoftmaxInPlace(logits) - logit_y;
  });
  return PairwiseSum(cls) / static_cast<double>(batch.size());
}

double LossCombined(std::span<const Sample> batch, const MapperModel& model,
                    const EmbeddingMatrix& phi, double lambda) {
  return LossCorr(batch, model, phi) + lambda * LossCls(batch, model);
}

GradientResult ComputeGradients(std::span<const Sample> batch,
                                const MapperModel& model,
                                const EmbeddingMatrix& phi, LossMode mode,
                                double lambda, Execution execution) {
  CheckBatch(batch);
  CheckCompatible(model, phi);
  if (NeedsHead(mode)) RequireHead(model);
  const double corr_weight = mode == LossMode::kCls ? 0.0 : 1.0;
  const double cls_weight = ClsWeight(mode, lambda);
  const std::size_t width = model.num_parameters();
  const std::size_t m = batch.size();

  std::vector<double> buffer(m * width, 0.0);
  std::vector<double> corr(m), cls(m);
  ForEachSample(m, execution, [&](std::size_t b) {
    const SampleLoss l =
        SampleTerms(model, phi, batch[b], corr_weight, cls_weight,
                    std::span(buffer).subspan(b * width, width));
    corr[b] = l.corr;
    cls[b] = l.cls;
  });
  PairwiseReduceRows(buffer, width, execution);

  GradientResult result;
  result.loss = Combine(corr, cls, model.head.has_value(), mode, lambda);
  result.gradient.assign(buffer.begin(), buffer.begin() + width);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (double& g : result.gradient) g *= inv_m;
  return result;
}

std::size_t ClassifyNearestCentroid(const MapperModel& model,
                                    const EmbeddingMatrix& phi,
                                    std::span<const double> x) {
  CheckCompatible(model, phi);
  const std::vector<double> psi = Embed(model, x);
  std::size_t best = 0;
  double best_score = Dot(psi, phi.row(0));
  for (std::size_t c = 1; c < phi.num_classes(); ++c) {
    const double score = Dot(psi, phi.row(c));
    if (score > best_score) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

std::size_t ClassifySoftmax(const MapperModel& model, std::span<const double> x) {
  const std::vector<double> logits =
      HeadLogits(RequireHead(model), Embed(model, x));
  return static_cast<std::size_t>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
}

}  // namespace hierembed
