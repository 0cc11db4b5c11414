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

#ifndef HIEREMBED_SYNTHETIC_H_
#define HIEREMBED_SYNTHETIC_H_

#include <cstdint>

#include "hierembed/embedding.h"
#include "hierembed/mapper.h"

namespace hierembed {

enum class Lifting {
  kRandomOrthonormal,  // p x d with orthonormal columns
  kIdentity,           // requires p == d
};

struct SyntheticOptions {
  std::size_t samples_per_class = 50;
  double noise_sigma = 0.15;
  std::size_t input_dim = 32;
  // The lifting depends on `seed` only; the noise on (seed, stream). Use
  // different streams to draw train/test splits under the same lifting.
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  Lifting lifting = Lifting::kRandomOrthonormal;
};

// Samples are lifting * phi(c_y) + N(0, sigma^2 I), class-major.
FeatureDataset GenerateSyntheticDataset(const EmbeddingMatrix& phi,
                                        const SyntheticOptions& options);

}  // namespace hierembed

#endif  // HIEREMBED_SYNTHETIC_H_
