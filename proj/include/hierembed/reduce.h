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

#ifndef HIEREMBED_REDUCE_H_
#define HIEREMBED_REDUCE_H_

#include <cstdint>
#include <span>

#include "hierembed/matrix.h"

namespace hierembed {

// Sums the `rows` rows of a row-major buffer into row 0 using a fixed
// pairwise tree: level s adds row i + s into row i for i = 0, 2s, 4s, ...
// The association order depends only on `rows`, never on thread count.
inline void PairwiseReduceRows(std::span<double> buffer, std::size_t width,
                               Execution execution) {
  const std::size_t rows = width == 0 ? 0 : buffer.size() / width;
  for (std::size_t stride = 1; stride < rows; stride *= 2) {
    const std::int64_t pairs =
        static_cast<std::int64_t>((rows - stride + 2 * stride - 1) / (2 * stride));
    auto add = [&](std::int64_t p) {
      const std::size_t dst = static_cast<std::size_t>(p) * 2 * stride;
      double* a = buffer.data() + dst * width;
      const double* b = buffer.data() + (dst + stride) * width;
      for (std::size_t k = 0; k < width; ++k) a[k] += b[k];
    };
    if (execution == Execution::kParallel && pairs > 1) {
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < pairs; ++p) add(p);
    } else {
      for (std::int64_t p = 0; p < pairs; ++p) add(p);
    }
  }
}

// Pairwise sum; overwrites `values`.
inline double PairwiseSum(std::span<double> values) {
  if (values.empty()) return 0.0;
  PairwiseReduceRows(values, 1, Execution::kSerial);
  return values[0];
}

}  // namespace hierembed

#endif  // HIEREMBED_REDUCE_H_
