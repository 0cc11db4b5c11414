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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hierembed/embedding.h"
#include "hierembed/errors.h"
#include "hierembed/mapper.h"
#include "hierembed/similarity.h"
#include "hierembed/synthetic.h"
#include "hierembed/taxonomy.h"
#include "hierembed/train.h"

namespace hierembed {
namespace {

EmbeddingMatrix TreeEmbeddings(std::size_t classes, std::uint64_t seed) {
  return ComputeEmbeddings(ComputeSimilarityMatrix(RandomTree(classes, seed)));
}

MapperModel IdentityModel(std::size_t d) {
  MapperModel m;
  m.weights = Matrix::Identity(d);
  m.bias.assign(d, 0.0);
  return m;
}

std::vector<Sample> RandomBatch(std::size_t m, std::size_t p, std::size_t n,
                                std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<Sample> batch(m);
  for (std::size_t i = 0; i < m; ++i) {
    batch[i].label = gen() % n;
    for (std::size_t j = 0; j < p; ++j) batch[i].features.push_back(normal(gen));
  }
  return batch;
}

// Central differences of the total loss over every parameter.
std::vector<double> NumericGradient(std::span<const Sample> batch,
                                    MapperModel model,
                                    const EmbeddingMatrix& phi, LossMode mode,
                                    double lambda, double h) {
  std::vector<double> params = model.Parameters();
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    model.SetParameters(params);
    const double up =
        EvaluateLoss(batch, model, phi, mode, lambda, Execution::kSerial).total;
    params[i] = saved - h;
    model.SetParameters(params);
    const double down =
        EvaluateLoss(batch, model, phi, mode, lambda, Execution::kSerial).total;
    params[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double MaxRelativeError(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-4});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

// ---- normalization and embedding ----------------------------------------

TEST(L2Normalize, Basics) {
  EXPECT_EQ(L2Normalize(std::vector<double>{3, 4}),
            (std::vector<double>{0.6, 0.8}));
  const std::vector<double> unit = {0.6, 0.8};
  EXPECT_EQ(L2Normalize(unit), unit);
  EXPECT_THROW(L2Normalize(std::vector<double>{0, 1e-13}), NumericalError);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal(0, 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + trial % 17);
    for (double& x : v) x = normal(gen);
    const auto u = L2Normalize(v);
    ASSERT_NEAR(std::sqrt(Dot(u, u)), 1.0, 1e-12);
  }
}

TEST(Embed, HandExample) {
  MapperModel m = IdentityModel(2);
  m.weights(1, 1) = 2.0;
  const auto psi = Embed(m, std::vector<double>{1, 1});
  EXPECT_NEAR(psi[0], 1 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(psi[1], 2 / std::sqrt(5.0), 1e-15);
  const std::vector<double> unit = {0.6, 0.8};
  EXPECT_EQ(Embed(IdentityModel(2), unit), unit);
}

TEST(Embed, OutputIsUnitNorm) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const MapperModel m = InitializeModel(7, 4, 0, trial);
    for (const Sample& s : RandomBatch(5, 7, 1, gen)) {
      const auto psi = Embed(m, s.features);
      ASSERT_NEAR(std::sqrt(Dot(psi, psi)), 1.0, 1e-12);
    }
  }
}

TEST(InitializeModel, RangeAndLayout) {
  const MapperModel m = InitializeModel(16, 4, 3, 9);
  EXPECT_EQ(m.input_dim(), 16u);
  EXPECT_EQ(m.embed_dim(), 4u);
  EXPECT_EQ(m.num_head_classes(), 3u);
  EXPECT_EQ(m.num_parameters(), 16u * 4 + 4 + 3 * 4 + 3);
  for (double w : m.weights.data()) ASSERT_LE(std::abs(w), 0.25);
  for (double w : m.head->weights.data()) ASSERT_LE(std::abs(w), 0.5);
  EXPECT_EQ(InitializeModel(16, 4, 3, 9), m);
  EXPECT_FALSE(InitializeModel(16, 4, 3, 10) == m);
  MapperModel copy = m;
  copy.SetParameters(m.Parameters());
  EXPECT_EQ(copy, m);
}

// ---- losses --------------------------------------------------------------

TEST(LossCorr, Cases) {
  const EmbeddingMatrix phi(std::vector<std::string>{"a", "b"},
                            Matrix::Identity(2));
  const MapperModel id = IdentityModel(2);
  const std::vector<Sample> aligned = {{{1, 0}, 0}, {{0, 5}, 1}};
  EXPECT_EQ(LossCorr(aligned, id, phi), 0.0);
  const std::vector<Sample> orthogonal = {{{0, 1}, 0}, {{2, 0}, 1}};
  EXPECT_EQ(LossCorr(orthogonal, id, phi), 1.0);
  // psi . phi = 2/3.
  const std::vector<Sample> partial = {
      {{2.0 / 3.0, std::sqrt(5.0) / 3.0}, 0}};
  EXPECT_NEAR(LossCorr(partial, id, phi), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(LossCorr(std::vector<Sample>{{{1, 0}, 2}}, id, phi), Error);
}

TEST(LossCorr, WithinZeroAndTwo) {
  std::mt19937_64 gen(4);
  const EmbeddingMatrix phi = TreeEmbeddings(6, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const MapperModel m = InitializeModel(5, phi.dim(), 0, trial);
    const double loss = LossCorr(RandomBatch(8, 5, 6, gen), m, phi);
    ASSERT_GE(loss, 0.0);
    ASSERT_LE(loss, 2.0);
  }
}

TEST(LossCls, Cases) {
  MapperModel m = IdentityModel(2);
  m.head = ClassifierHead{Matrix(2, 2), {0.0, 0.0}};  // logits [0, 0]
  const std::vector<Sample> batch = {{{1, 0}, 0}, {{0, 1}, 1}};
  EXPECT_NEAR(LossCls(batch, m), std::log(2.0), 1e-15);

  MapperModel five = IdentityModel(3);
  five.head = ClassifierHead{Matrix(5, 3), std::vector<double>(5, 0.7)};
  EXPECT_NEAR(LossCls(std::vector<Sample>{{{1, 2, 3}, 4}}, five),
              std::log(5.0), 1e-14);

  MapperModel sure = IdentityModel(2);
  sure.head = ClassifierHead{Matrix(2, 2), {800.0, 0.0}};
  EXPECT_EQ(LossCls(std::vector<Sample>{{{1, 0}, 0}}, sure), 0.0);
  EXPECT_THROW(LossCls(batch, IdentityModel(2)), Error);
}

TEST(LossCombined, Arithmetic) {
  const EmbeddingMatrix phi = TreeEmbeddings(4, 8);
  std::mt19937_64 gen(5);
  const auto batch = RandomBatch(6, 5, 4, gen);
  const MapperModel m = InitializeModel(5, phi.dim(), 4, 3);
  EXPECT_EQ(LossCombined(batch, m, phi, 0.0), LossCorr(batch, m, phi));
  EXPECT_EQ(LossCombined(batch, m, phi, 0.1),
            LossCorr(batch, m, phi) + 0.1 * LossCls(batch, m));
  const LossBreakdown b =
      EvaluateLoss(batch, m, phi, LossMode::kCorrPlusCls, 0.1);
  EXPECT_EQ(b.total, LossCombined(batch, m, phi, 0.1));
  EXPECT_EQ(TrainConfig{}.lambda, 0.1);
}

TEST(LossMode, Names) {
  EXPECT_EQ(ParseLossMode("corr"), LossMode::kCorr);
  EXPECT_EQ(ParseLossMode("corr+cls"), LossMode::kCorrPlusCls);
  EXPECT_EQ(ParseLossMode("cls"), LossMode::kCls);
  EXPECT_THROW(ParseLossMode("mse"), Error);
  EXPECT_EQ(LossModeName(LossMode::kCorrPlusCls), "corr+cls");
}

// ---- gradients -----------------------------------------------------------

class GradientCheck : public ::testing::TestWithParam<LossMode> {};

TEST_P(GradientCheck, MatchesCentralDifferences) {
  const LossMode mode = GetParam();
  std::mt19937_64 gen(100 + static_cast<int>(mode));
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t n = 3 + instance % 4;
    const std::size_t p = 4 + instance % 5;
    const EmbeddingMatrix phi = TreeEmbeddings(n, instance + 1);
    MapperModel model =
        InitializeModel(p, phi.dim(), NeedsHead(mode) ? n : 0, instance);
    auto params = model.Parameters();
    for (double& w : params) w *= 3.0;
    model.SetParameters(params);
    const auto batch = RandomBatch(5, p, n, gen);
    const double lambda = 0.1 + 0.3 * (instance % 3);
    const GradientResult analytic =
        ComputeGradients(batch, model, phi, mode, lambda, Execution::kSerial);
    const auto numeric = NumericGradient(batch, model, phi, mode, lambda, 1e-5);
    EXPECT_LE(MaxRelativeError(analytic.gradient, numeric), 1e-5)
        << LossModeName(mode) << " instance " << instance;
    EXPECT_EQ(analytic.loss.total,
              EvaluateLoss(batch, model, phi, mode, lambda, Execution::kSerial)
                  .total);
  }
}

INSTANTIATE_TEST_SUITE_P(AllModes, GradientCheck,
                         ::testing::Values(LossMode::kCorr,
                                           LossMode::kCorrPlusCls,
                                           LossMode::kCls));

TEST(Gradients, VanishAtPerfectAlignment) {
  const EmbeddingMatrix phi = TreeEmbeddings(5, 6);
  std::vector<Sample> batch;
  for (std::size_t c = 0; c < phi.num_classes(); ++c) {
    const auto row = phi.row(c);
    batch.push_back({{row.begin(), row.end()}, c});
  }
  const GradientResult g = ComputeGradients(batch, IdentityModel(phi.dim()),
                                            phi, LossMode::kCorr, 0.1);
  for (double x : g.gradient) ASSERT_NEAR(x, 0.0, 1e-15);
}

TEST(Gradients, ZeroInputLeavesWeightsUntouched) {
  const EmbeddingMatrix phi = TreeEmbeddings(4, 7);
  MapperModel m = InitializeModel(3, phi.dim(), 0, 1);
  m.weights = Matrix(phi.dim(), 3);
  const std::vector<Sample> batch = {{{0, 0, 0}, 1}, {{0, 0, 0}, 2}};
  const GradientResult g =
      ComputeGradients(batch, m, phi, LossMode::kCorr, 0.1);
  for (std::size_t i = 0; i < m.weights.data().size(); ++i) {
    ASSERT_EQ(g.gradient[i], 0.0);
  }
}

TEST(Gradients, SerialAndParallelAgreeBitwise) {
  std::mt19937_64 gen(8);
  const EmbeddingMatrix phi = TreeEmbeddings(9, 2);
  for (LossMode mode : {LossMode::kCorr, LossMode::kCorrPlusCls, LossMode::kCls}) {
    const MapperModel m = InitializeModel(12, phi.dim(), 9, 4);
    const auto batch = RandomBatch(37, 12, 9, gen);
    const auto a = ComputeGradients(batch, m, phi, mode, 0.1, Execution::kSerial);
    const auto b =
        ComputeGradients(batch, m, phi, mode, 0.1, Execution::kParallel);
    EXPECT_EQ(a.gradient, b.gradient);
    EXPECT_EQ(a.loss.total, b.loss.total);
  }
}

// ---- schedules and training ---------------------------------------------

TEST(LearningRate, Schedules) {
  TrainConfig c;
  c.base_lr = 1.0;
  c.min_lr = 0.0;
  c.epochs = 10;
  c.schedule = Schedule::kConstant;
  EXPECT_EQ(LearningRate(c, 7), 1.0);
  c.schedule = Schedule::kCosine;
  EXPECT_EQ(LearningRate(c, 0), 1.0);
  EXPECT_NEAR(LearningRate(c, 5), 0.5, 1e-15);
  EXPECT_NEAR(LearningRate(c, 9),
              0.5 * (1 + std::cos(std::numbers::pi * 0.9)), 1e-15);
  c.schedule = Schedule::kCosineWithRestarts;
  c.cycle_len = 4;
  c.cycle_multiplier = 2.0;
  EXPECT_EQ(LearningRate(c, 0), 1.0);
  EXPECT_EQ(LearningRate(c, 4), 1.0);   // restart
  EXPECT_EQ(LearningRate(c, 12), 1.0);  // cycles of 4 then 8
  EXPECT_NEAR(LearningRate(c, 8), 0.5, 1e-15);
  EXPECT_EQ(ParseSchedule("sgdr"), Schedule::kCosineWithRestarts);
  EXPECT_THROW(ParseSchedule("step"), Error);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = TrainConfig{};
  c.base_lr = 0.0;
  EXPECT_THROW(c.Validate(), Error);
  c = TrainConfig{};
  c.lambda = -1.0;
  EXPECT_THROW(c.Validate(), Error);
}

struct Fixture {
  EmbeddingMatrix phi = TreeEmbeddings(8, 21);
  FeatureDataset data;
  Fixture() {
    SyntheticOptions o;
    o.samples_per_class = 20;
    o.input_dim = 16;
    o.noise_sigma = 0.15;
    o.seed = 21;
    data = GenerateSyntheticDataset(phi, o);
  }
};

TEST(Train, ZeroEpochsReturnsInitialization) {
  Fixture f;
  TrainConfig c;
  c.epochs = 0;
  c.seed = 5;
  const TrainResult r = Train(f.data, f.phi, c);
  EXPECT_TRUE(r.history.empty());
  EXPECT_EQ(r.model, InitializeModel(16, f.phi.dim(), 0, 5));
}

TEST(Train, DeterministicAndExecutionIndependent) {
  Fixture f;
  TrainConfig c;
  c.epochs = 5;
  c.loss_mode = LossMode::kCorrPlusCls;
  const TrainResult a = Train(f.data, f.phi, c);
  const TrainResult b = Train(f.data, f.phi, c);
  EXPECT_EQ(a.model, b.model);
  c.execution = Execution::kSerial;
  EXPECT_EQ(Train(f.data, f.phi, c).model, a.model);
  c.seed += 1;
  EXPECT_FALSE(Train(f.data, f.phi, c).model == a.model);
}

TEST(Train, SeparableDataReachesLowCorrelationLoss) {
  const EmbeddingMatrix phi = TreeEmbeddings(20, 3);
  SyntheticOptions o;
  o.seed = 3;
  o.noise_sigma = 0.05;
  const FeatureDataset data = GenerateSyntheticDataset(phi, o);
  TrainConfig c;
  c.epochs = 100;
  const TrainResult r = Train(data, phi, c);
  ASSERT_EQ(r.history.size(), 100u);
  EXPECT_LT(r.history.back().loss.corr, 0.05);
  EXPECT_LT(r.history.back().loss.corr, r.history.front().loss.corr);
}

TEST(Train, ConstantSmallStepDescendsMonotonically) {
  Fixture f;
  TrainConfig c;
  c.epochs = 40;
  c.schedule = Schedule::kConstant;
  c.base_lr = 0.01;
  for (LossMode mode : {LossMode::kCorr, LossMode::kCorrPlusCls}) {
    c.loss_mode = mode;
    const TrainResult r = Train(f.data, f.phi, c);
    for (std::size_t e = 1; e < r.history.size(); ++e) {
      ASSERT_LE(r.history[e].loss.total, r.history[e - 1].loss.total + 1e-9)
          << LossModeName(mode) << " epoch " << e + 1;
    }
  }
}

TEST(Train, DivergenceIsReported) {
  Fixture f;
  TrainConfig c;
  c.epochs = 50;
  c.base_lr = 1e308;
  c.clip_norm = 0.0;
  c.schedule = Schedule::kConstant;
  c.loss_mode = LossMode::kCorrPlusCls;
  EXPECT_THROW(Train(f.data, f.phi, c), NumericalError);
  f.data.samples[3].features[0] = NAN;
  c.base_lr = 0.1;
  EXPECT_THROW(Train(f.data, f.phi, c), Error);
}

// ---- classification ------------------------------------------------------

TEST(ClassifyNearestCentroid, ExactCentroid) {
  const EmbeddingMatrix phi = TreeEmbeddings(6, 12);
  const auto row = phi.row(3);
  EXPECT_EQ(ClassifyNearestCentroid(IdentityModel(phi.dim()), phi,
                                    std::vector<double>(row.begin(), row.end())),
            3u);
}

TEST(ClassifyNearestCentroid, MatchesDistanceScanAndIgnoresScale) {
  std::mt19937_64 gen(13);
  const EmbeddingMatrix phi = TreeEmbeddings(10, 13);
  for (int trial = 0; trial < 20; ++trial) {
    const MapperModel m = InitializeModel(6, phi.dim(), 0, trial);
    MapperModel scaled = m;
    for (double& w : scaled.weights.data()) w *= 4.5;
    for (double& b : scaled.bias) b *= 4.5;
    for (const Sample& s : RandomBatch(20, 6, 10, gen)) {
      const auto psi = Embed(m, s.features);
      std::size_t best = 0;
      double best_dist = INFINITY;
      for (std::size_t c = 0; c < phi.num_classes(); ++c) {
        double dist = 0.0;
        for (std::size_t k = 0; k < psi.size(); ++k) {
          dist += (psi[k] - phi.row(c)[k]) * (psi[k] - phi.row(c)[k]);
        }
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      ASSERT_EQ(ClassifyNearestCentroid(m, phi, s.features), best);
      ASSERT_EQ(ClassifyNearestCentroid(scaled, phi, s.features), best);
    }
  }
}

// ---- synthetic data ------------------------------------------------------

TEST(Synthetic, NoiselessIdentityGivesCentroids) {
  const EmbeddingMatrix phi = TreeEmbeddings(5, 14);
  SyntheticOptions o;
  o.noise_sigma = 0.0;
  o.input_dim = phi.dim();
  o.lifting = Lifting::kIdentity;
  o.samples_per_class = 3;
  const FeatureDataset d = GenerateSyntheticDataset(phi, o);
  ASSERT_EQ(d.samples.size(), 15u);
  for (const Sample& s : d.samples) {
    const auto row = phi.row(s.label);
    ASSERT_EQ(s.features, std::vector<double>(row.begin(), row.end()));
  }
}

TEST(Synthetic, SeededAndStreamed) {
  const EmbeddingMatrix phi = TreeEmbeddings(5, 15);
  SyntheticOptions o;
  const FeatureDataset a = GenerateSyntheticDataset(phi, o);
  const FeatureDataset b = GenerateSyntheticDataset(phi, o);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    ASSERT_EQ(a.samples[i].features, b.samples[i].features);
  }
  o.stream = 1;
  EXPECT_NE(GenerateSyntheticDataset(phi, o).samples[0].features,
            a.samples[0].features);
  o.input_dim = 3;
  EXPECT_THROW(GenerateSyntheticDataset(phi, o), Error);
}

TEST(Synthetic, SmallNoiseIsNearlySeparableWithoutLifting) {
  const EmbeddingMatrix phi = TreeEmbeddings(20, 16);
  SyntheticOptions o;
  o.noise_sigma = 0.05;
  o.input_dim = phi.dim();
  o.lifting = Lifting::kIdentity;
  const FeatureDataset d = GenerateSyntheticDataset(phi, o);
  const MapperModel id = IdentityModel(phi.dim());
  std::size_t correct = 0;
  for (const Sample& s : d.samples) {
    correct += ClassifyNearestCentroid(id, phi, s.features) == s.label;
  }
  EXPECT_GE(static_cast<double>(correct) / d.samples.size(), 0.99);
}

}  // namespace
}  // namespace hierembed
