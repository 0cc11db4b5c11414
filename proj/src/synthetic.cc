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

#include "hierembed/synthetic.h"

#include <cmath>

#include "hierembed/errors.h"
#include "hierembed/random.h"

namespace hierembed {
namespace {

// Gaussian matrix orthonormalized column by column (modified Gram-Schmidt).
Matrix RandomOrthonormalColumns(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double norm = 0.0;
    do {
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = rng.Normal();
      for (std::size_t k = 0; k < j; ++k) {
        double proj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) proj += m(i, j) * m(i, k);
        for (std::size_t i = 0; i < rows; ++i) m(i, j) -= proj * m(i, k);
      }
      norm = 0.0;
      for (std::size_t i = 0; i < rows; ++i) norm += m(i, j) * m(i, j);
      norm = std::sqrt(norm);
    } while (norm < 1e-8);
    for (std::size_t i = 0; i < rows; ++i) m(i, j) /= norm;
  }
  return m;
}

}  // namespace

FeatureDataset GenerateSyntheticDataset(const EmbeddingMatrix& phi,
                                        const SyntheticOptions& options) {
  const std::size_t d = phi.dim();
  const std::size_t p = options.input_dim;
  if (d == 0 || phi.num_classes() == 0) throw Error("empty class embeddings");
  if (p < d) {
    throw Error("input dimension " + std::to_string(p) +
                " is smaller than the embedding dimension " + std::to_string(d));
  }
  if (options.lifting == Lifting::kIdentity && p != d) {
    throw Error("identity lifting requires input_dim == embedding dimension");
  }
  if (options.noise_sigma < 0.0) throw Error("noise sigma must be >= 0");

  Rng lifting_rng(options.seed);
  const Matrix lifting = options.lifting == Lifting::kIdentity
                             ? Matrix::Identity(p)
                             : RandomOrthonormalColumns(p, d, lifting_rng);
  Rng noise_rng(options.seed * 0x9E3779B97F4A7C15ull + options.stream + 1);

  FeatureDataset data;
  data.input_dim = p;
  data.num_classes = phi.num_classes();
  data.class_names = phi.class_order();
  data.samples.reserve(phi.num_classes() * options.samples_per_class);
  for (std::size_t c = 0; c < phi.num_classes(); ++c) {
    std::vector<double> center(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) center[i] = Dot(lifting.row(i), phi.row(c));
    for (std::size_t s = 0; s < options.samples_per_class; ++s) {
      Sample sample{center, c};
      if (options.noise_sigma > 0.0) {
        for (double& x : sample.features) x += options.noise_sigma * noise_rng.Normal();
      }
      data.samples.push_back(std::move(sample));
    }
  }
  return data;
}

}  // namespace hierembed
