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

#include "hierembed/io.h"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "hierembed/errors.h"

namespace hierembed {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Non-blank lines with their 1-based numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool Next(std::string_view& line) {
    while (pos_ <= text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_number_;
      raw = Trim(raw);
      if (!raw.empty() && raw.front() != '#') {
        line = raw;
        return true;
      }
    }
    return false;
  }

  // Like Next, but a missing line is a ParseError.
  std::string_view Require(const char* what) {
    std::string_view line;
    if (!Next(line)) {
      throw ParseError(line_number_, std::string("unexpected end of input, expected ") + what);
    }
    return line;
  }

  std::size_t line_number() const { return line_number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_number_ = 0;
};

std::vector<std::string_view> Split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  if (sep == ' ') {
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      const std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos > start) out.push_back(line.substr(start, pos - start));
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(sep, start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double ParseDouble(std::string_view token, std::size_t line) {
  double value = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "invalid number '" + std::string(token) + "'");
  }
  return value;
}

template <typename Int>
Int ParseInt(std::string_view token, std::size_t line) {
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "invalid integer '" + std::string(token) + "'");
  }
  return value;
}

void ExpectFields(const std::vector<std::string_view>& fields, std::size_t count,
                  std::size_t line, const char* what) {
  if (fields.size() != count) {
    throw ParseError(line, std::string("expected ") + std::to_string(count) +
                               " fields for " + what + ", found " +
                               std::to_string(fields.size()));
  }
}

std::vector<double> ParseRow(LineReader& reader, std::size_t count, const char* what) {
  const auto line = reader.Require(what);
  const auto fields = Split(line, ' ');
  ExpectFields(fields, count, reader.line_number(), what);
  std::vector<double> row(count);
  for (std::size_t i = 0; i < count; ++i) row[i] = ParseDouble(fields[i], reader.line_number());
  return row;
}

void AppendRow(std::string& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += FormatDouble(values[i]);
  }
  out += '\n';
}

class ClassIndex {
 public:
  explicit ClassIndex(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) index_.emplace(names[i], i);
  }
  std::size_t Get(std::string_view name, std::size_t line) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
      throw ParseError(line, "unknown label '" + std::string(name) + "'");
    }
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string FormatEmbeddings(const EmbeddingMatrix& phi) {
  std::string out = std::to_string(phi.num_classes()) + " " +
                    std::to_string(phi.dim()) + "\n";
  for (std::size_t i = 0; i < phi.num_classes(); ++i) {
    out += phi.class_order()[i];
    out += ' ';
    AppendRow(out, phi.row(i));
  }
  return out;
}

EmbeddingMatrix ParseEmbeddings(std::string_view text) {
  LineReader reader(text);
  const auto header = Split(reader.Require("'n d' header"), ' ');
  ExpectFields(header, 2, reader.line_number(), "'n d' header");
  const auto n = ParseInt<std::size_t>(header[0], reader.line_number());
  const auto d = ParseInt<std::size_t>(header[1], reader.line_number());
  std::vector<std::string> names;
  Matrix rows(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = Split(reader.Require("embedding row"), ' ');
    ExpectFields(fields, d + 1, reader.line_number(), "embedding row");
    names.emplace_back(fields[0]);
    for (std::size_t j = 0; j < d; ++j) {
      rows(i, j) = ParseDouble(fields[j + 1], reader.line_number());
    }
  }
  std::string_view extra;
  if (reader.Next(extra)) throw ParseError(reader.line_number(), "trailing data");
  return EmbeddingMatrix(std::move(names), std::move(rows));
}

std::string FormatSimilarityMatrix(const SimilarityMatrix& s) {
  std::string out = std::to_string(s.size()) + "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s.classes()[i];
  }
  out += '\n';
  for (std::size_t i = 0; i < s.size(); ++i) AppendRow(out, s.values().row(i));
  return out;
}

SimilarityMatrix ParseSimilarityMatrix(std::string_view text) {
  LineReader reader(text);
  const auto header = Split(reader.Require("'n' header"), ' ');
  ExpectFields(header, 1, reader.line_number(), "'n' header");
  const auto n = ParseInt<std::size_t>(header[0], reader.line_number());
  const auto names_view = Split(reader.Require("class identifiers"), ' ');
  ExpectFields(names_view, n, reader.line_number(), "class identifiers");
  std::vector<std::string> names(names_view.begin(), names_view.end());
  Matrix values(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ParseRow(reader, n, "similarity row");
    for (std::size_t j = 0; j < n; ++j) values(i, j) = row[j];
  }
  return SimilarityMatrix(std::move(names), std::move(values));
}

FeatureDataset ParseDatasetCsv(std::string_view text,
                               const std::vector<std::string>& class_names) {
  const ClassIndex index(class_names);
  FeatureDataset data;
  data.num_classes = class_names.size();
  data.class_names = class_names;
  LineReader reader(text);
  std::string_view line;
  bool first = true;
  while (reader.Next(line)) {
    const auto fields = Split(line, ',');
    const std::size_t ln = reader.line_number();
    if (fields.size() < 2) throw ParseError(ln, "expected '<label>,<features...>'");
    if (first) {
      data.input_dim = fields.size() - 1;
      first = false;
    } else if (fields.size() - 1 != data.input_dim) {
      throw ParseError(ln, "expected " + std::to_string(data.input_dim) +
                               " features, found " + std::to_string(fields.size() - 1));
    }
    Sample sample;
    sample.label = index.Get(fields[0], ln);
    sample.features.reserve(data.input_dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      sample.features.push_back(ParseDouble(fields[i], ln));
    }
    data.samples.push_back(std::move(sample));
  }
  return data;
}

std::string FormatDatasetCsv(const FeatureDataset& dataset) {
  if (dataset.class_names.size() != dataset.num_classes) {
    throw Error("dataset has no class names to write");
  }
  std::string out;
  for (const Sample& s : dataset.samples) {
    out += dataset.class_names[s.label];
    for (double x : s.features) {
      out += ',';
      out += FormatDouble(x);
    }
    out += '\n';
  }
  return out;
}

LabeledVectors ParseDatabaseCsv(std::string_view text,
                                const std::vector<std::string>& class_names) {
  const ClassIndex index(class_names);
  LabeledVectors items;
  std::vector<double> flat;
  std::size_t dim = 0;
  LineReader reader(text);
  std::string_view line;
  while (reader.Next(line)) {
    const auto fields = Split(line, ',');
    const std::size_t ln = reader.line_number();
    if (fields.size() < 3) throw ParseError(ln, "expected '<id>,<label>,<features...>'");
    if (items.ids.empty()) {
      dim = fields.size() - 2;
    } else if (fields.size() - 2 != dim) {
      throw ParseError(ln, "expected " + std::to_string(dim) + " features, found " +
                               std::to_string(fields.size() - 2));
    }
    items.ids.push_back(ParseInt<std::int64_t>(fields[0], ln));
    items.labels.push_back(index.Get(fields[1], ln));
    for (std::size_t i = 2; i < fields.size(); ++i) flat.push_back(ParseDouble(fields[i], ln));
  }
  items.vectors = Matrix(items.ids.size(), dim);
  std::copy(flat.begin(), flat.end(), items.vectors.data().begin());
  return items;
}

std::string FormatDatabaseCsv(const LabeledVectors& items,
                              const std::vector<std::string>& class_names) {
  items.Validate();
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += std::to_string(items.ids[i]);
    out += ',';
    out += class_names.at(items.labels[i]);
    for (double x : items.vectors.row(i)) {
      out += ',';
      out += FormatDouble(x);
    }
    out += '\n';
  }
  return out;
}

std::string FormatModel(const ModelFile& file) {
  const MapperModel& m = file.model;
  if (NeedsHead(file.loss_mode) != m.head.has_value()) {
    throw Error("loss mode and classifier head presence disagree");
  }
  std::string out = std::to_string(m.input_dim()) + " " +
                    std::to_string(m.embed_dim()) + " " +
                    std::to_string(file.num_classes) + " " +
                    std::string(LossModeName(file.loss_mode)) + "\n";
  for (std::size_t r = 0; r < m.embed_dim(); ++r) AppendRow(out, m.weights.row(r));
  AppendRow(out, m.bias);
  if (m.head) {
    for (std::size_t r = 0; r < m.head->weights.rows(); ++r) {
      AppendRow(out, m.head->weights.row(r));
    }
    AppendRow(out, m.head->bias);
  }
  return out;
}

ModelFile ParseModel(std::string_view text) {
  LineReader reader(text);
  const auto header = Split(reader.Require("'p d n loss_mode' header"), ' ');
  ExpectFields(header, 4, reader.line_number(), "'p d n loss_mode' header");
  const std::size_t ln = reader.line_number();
  const auto p = ParseInt<std::size_t>(header[0], ln);
  const auto d = ParseInt<std::size_t>(header[1], ln);
  ModelFile file;
  file.num_classes = ParseInt<std::size_t>(header[2], ln);
  try {
    file.loss_mode = ParseLossMode(header[3]);
  } catch (const Error& e) {
    throw ParseError(ln, e.what());
  }
  MapperModel& m = file.model;
  m.weights = Matrix(d, p);
  for (std::size_t r = 0; r < d; ++r) {
    const auto row = ParseRow(reader, p, "weight row");
    std::copy(row.begin(), row.end(), m.weights.row(r).begin());
  }
  m.bias = ParseRow(reader, d, "bias row");
  if (NeedsHead(file.loss_mode)) {
    ClassifierHead head{Matrix(file.num_classes, d), {}};
    for (std::size_t r = 0; r < file.num_classes; ++r) {
      const auto row = ParseRow(reader, d, "head weight row");
      std::copy(row.begin(), row.end(), head.weights.row(r).begin());
    }
    head.bias = ParseRow(reader, file.num_classes, "head bias row");
    m.head = std::move(head);
  }
  std::string_view extra;
  if (reader.Next(extra)) throw ParseError(reader.line_number(), "trailing data");
  return file;
}

std::string FormatTrainLog(const std::vector<EpochLog>& history) {
  std::string out = "epoch,lr,loss_corr,loss_cls,loss_total\n";
  for (const EpochLog& e : history) {
    out += std::to_string(e.epoch) + "," + FormatDouble(e.lr) + "," +
           FormatDouble(e.loss.corr) + "," + FormatDouble(e.loss.cls) + "," +
           FormatDouble(e.loss.total) + "\n";
  }
  return out;
}

}  // namespace hierembed
