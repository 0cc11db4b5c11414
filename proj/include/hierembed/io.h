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

// Text file formats. Every float is written with 17 significant digits so
// that reading a file back reproduces the exact doubles.
//
//   embeddings   "n d", then n lines "<class> x_1 ... x_d"
//   similarity   "n", one line of n class identifiers, n rows of n floats
//   dataset CSV  "<label>,x_1,...,x_p" per sample
//   database CSV "<id>,<label>,x_1,...,x_p" per item
//   model        "p d n <loss_mode>", W (d rows of p), b (1 row of d), and
//                for modes with a head: H (n rows of d), c (1 row of n)
//   train log    "epoch,lr,loss_corr,loss_cls,loss_total" header + rows

#ifndef HIEREMBED_IO_H_
#define HIEREMBED_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "hierembed/embedding.h"
#include "hierembed/mapper.h"
#include "hierembed/retrieval.h"
#include "hierembed/similarity.h"
#include "hierembed/train.h"

namespace hierembed {

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

std::string FormatDouble(double value);

std::string FormatEmbeddings(const EmbeddingMatrix& phi);
EmbeddingMatrix ParseEmbeddings(std::string_view text);

std::string FormatSimilarityMatrix(const SimilarityMatrix& s);
SimilarityMatrix ParseSimilarityMatrix(std::string_view text);

// Labels are class identifiers resolved against `class_names`; an unknown
// label is a ParseError naming it.
FeatureDataset ParseDatasetCsv(std::string_view text,
                               const std::vector<std::string>& class_names);
// Requires dataset.class_names.
std::string FormatDatasetCsv(const FeatureDataset& dataset);

LabeledVectors ParseDatabaseCsv(std::string_view text,
                                const std::vector<std::string>& class_names);
std::string FormatDatabaseCsv(const LabeledVectors& items,
                              const std::vector<std::string>& class_names);

struct ModelFile {
  MapperModel model;
  std::size_t num_classes = 0;
  LossMode loss_mode = LossMode::kCorr;
};
std::string FormatModel(const ModelFile& file);
ModelFile ParseModel(std::string_view text);

std::string FormatTrainLog(const std::vector<EpochLog>& history);

}  // namespace hierembed

#endif  // HIEREMBED_IO_H_
