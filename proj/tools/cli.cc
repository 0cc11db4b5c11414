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

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <string_view>

#include "CLI11.hpp"
#include "hierembed/eigen.h"
#include "hierembed/embedding.h"
#include "hierembed/errors.h"
#include "hierembed/evaluate.h"
#include "hierembed/experiment.h"
#include "hierembed/io.h"
#include "hierembed/metric_check.h"
#include "hierembed/similarity.h"
#include "hierembed/taxonomy.h"
#include "hierembed/train.h"
#include "hierembed/treeify.h"

namespace hierembed::cli {
namespace {

constexpr const char* kSubcommands[] = {"validate", "treeify", "embed",
                                        "train",    "eval",    "demo"};

std::string Human(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void RequireReadable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
}

struct HierarchyArgs {
  std::string path;
  std::string classes_path;

  void Register(CLI::App* app) {
    app->add_option("hierarchy", path, "Edge-list file: '<parent> <child>' per line")
        ->required();
    app->add_option("--classes", classes_path,
                    "Class list file, one identifier per line (default: leaves)");
  }
  void Check() const {
    RequireReadable(path);
    if (!classes_path.empty()) RequireReadable(classes_path);
  }
  Taxonomy Load() const {
    std::optional<std::vector<std::string>> classes;
    if (!classes_path.empty()) classes = ParseClassList(ReadFile(classes_path));
    try {
      return ParseTaxonomy(ReadFile(path), std::move(classes));
    } catch (const ParseError& e) {
      throw Error(path + ": " + e.what());
    }
  }
};

// First node with more than one parent, for error messages.
std::string DescribeNonTree(const Taxonomy& t) {
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    if (t.parents(v).size() > 1) {
      return "node '" + t.name(v) + "' has " +
             std::to_string(t.parents(v).size()) + " parents";
    }
  }
  return "graph is not a tree";
}

struct Options {
  bool plain = false;
  std::string config;

  HierarchyArgs validate;

  HierarchyArgs treeify;
  std::string treeify_out;

  HierarchyArgs embed;
  std::string embed_out;
  std::size_t dims = 0;
  bool embed_treeify = false;
  std::string similarity_out;

  std::string dataset;
  std::string embeddings;
  std::string model_out;
  std::string log_out;
  TrainConfig train;
  std::string schedule = "cosine";
  std::string loss = "corr";
  bool verbose = false;

  HierarchyArgs eval;
  std::string features;
  bool normalize = false;
  std::string model;
  std::string eval_dataset;
  std::string eval_embeddings;
  std::size_t K = 250;
  std::string curve_out;
  std::string summary_out;

  ExperimentOptions demo;
  std::string demo_schedule = "cosine";
};

int RunValidate(const Options& o, std::ostream& out) {
  o.validate.Check();
  const Taxonomy t = o.validate.Load();
  const MetricReport report = CheckMetric(t);
  out << FormatMetricReport(report);
  return report.ok() ? kExitOk : kExitFindings;
}

int RunTreeify(const Options& o, std::ostream& out) {
  o.treeify.Check();
  const Taxonomy dag = o.treeify.Load();
  const Taxonomy tree = TreeFromDag(dag);
  const std::string edges = FormatEdgeList(tree);
  if (o.treeify_out.empty()) {
    out << edges;
  } else {
    WriteFile(o.treeify_out, edges);
    out << "nodes: " << dag.num_nodes() << " -> " << tree.num_nodes() << "\n"
        << "edges: " << dag.num_edges() << " -> " << tree.num_edges() << "\n"
        << "height: " << dag.max_height() << " -> " << tree.max_height()
        << "\n";
  }
  return kExitOk;
}

int RunEmbed(const Options& o, std::ostream& out) {
  o.embed.Check();
  Taxonomy t = o.embed.Load();
  if (o.embed_treeify) t = TreeFromDag(t);
  if (o.dims == 0) {
    if (!t.IsTree()) {
      throw Error("hierarchy is not a tree (" + DescribeNonTree(t) +
                  "); exact embeddings need a tree, pass --treeify or --dims");
    }
    if (!t.ClassesAreLeaves()) {
      for (NodeId c : t.classes()) {
        if (!t.IsLeaf(c)) {
          throw Error("class '" + t.name(c) +
                      "' is not a leaf; exact embeddings need leaf classes");
        }
      }
    }
  }
  const SimilarityMatrix s = ComputeSimilarityMatrix(t);
  const EmbeddingMatrix phi =
      o.dims == 0 ? ComputeEmbeddings(s) : LowDimEmbeddings(s, o.dims);
  WriteFile(o.embed_out, FormatEmbeddings(phi));
  if (!o.similarity_out.empty()) {
    WriteFile(o.similarity_out, FormatSimilarityMatrix(s));
  }
  out << "classes: " << phi.num_classes() << "\n"
      << "dims: " << phi.dim() << "\n"
      << "reconstruction_error: " << Human(ReconstructionError(phi, s)) << "\n";
  return kExitOk;
}

int RunTrain(const Options& o, std::ostream& out, std::ostream& err) {
  RequireReadable(o.dataset);
  RequireReadable(o.embeddings);
  TrainConfig config = o.train;
  config.schedule = ParseSchedule(o.schedule);
  config.loss_mode = ParseLossMode(o.loss);
  config.Validate();

  const EmbeddingMatrix phi = ParseEmbeddings(ReadFile(o.embeddings));
  FeatureDataset data;
  try {
    data = ParseDatasetCsv(ReadFile(o.dataset), phi.class_order());
  } catch (const ParseError& e) {
    throw Error(o.dataset + ": " + e.what());
  }
  data.Validate();
  if (data.samples.empty()) throw Error("dataset is empty");

  const TrainResult result = Train(data, phi, config);
  ModelFile file{result.model, phi.num_classes(), config.loss_mode};
  WriteFile(o.model_out, FormatModel(file));
  if (!o.log_out.empty()) WriteFile(o.log_out, FormatTrainLog(result.history));
  if (o.verbose) {
    for (const EpochLog& e : result.history) {
      err << "epoch " << e.epoch << " lr " << Human(e.lr) << " loss "
          << Human(e.loss.total) << "\n";
    }
  }
  const LossBreakdown last =
      result.history.empty()
          ? EvaluateLoss(data.samples, result.model, phi, config.loss_mode,
                         config.lambda)
          : result.history.back().loss;
  out << "samples: " << data.samples.size() << "\n"
      << "epochs: " << config.epochs << "\n"
      << "loss: " << LossModeName(config.loss_mode) << "\n"
      << "final_loss_corr: " << Human(last.corr) << "\n";
  if (NeedsHead(config.loss_mode)) {
    out << "final_loss_cls: " << Human(last.cls) << "\n";
  }
  out << "final_loss_total: " << Human(last.total) << "\n";
  return kExitOk;
}

// Maps each embedding row to the hierarchy's class index.
std::vector<std::size_t> MatchClasses(const EmbeddingMatrix& phi,
                                      const std::vector<std::string>& classes) {
  std::vector<std::size_t> index;
  for (const std::string& name : phi.class_order()) {
    std::size_t i = 0;
    while (i < classes.size() && classes[i] != name) ++i;
    if (i == classes.size()) {
      throw Error("embedding class '" + name + "' is not a hierarchy class");
    }
    index.push_back(i);
  }
  return index;
}

int RunEval(const Options& o, std::ostream& out, std::ostream& err) {
  o.eval.Check();
  const bool by_features = !o.features.empty();
  if (by_features == !o.model.empty()) {
    throw Error("pass either --features or --model with --dataset");
  }
  if (by_features) {
    RequireReadable(o.features);
  } else {
    if (o.eval_dataset.empty()) throw Error("--model needs --dataset");
    RequireReadable(o.model);
    RequireReadable(o.eval_dataset);
  }
  if (!o.eval_embeddings.empty()) RequireReadable(o.eval_embeddings);

  const Taxonomy t = o.eval.Load();
  const SimilarityMatrix s = ComputeSimilarityMatrix(t);
  const std::vector<std::string> classes = t.class_names();

  LabeledVectors items;
  std::optional<ModelFile> model;
  std::vector<std::vector<double>> raw;  // classifier inputs
  if (by_features) {
    items = ParseDatabaseCsv(ReadFile(o.features), classes);
    if (o.normalize) {
      for (std::size_t i = 0; i < items.size(); ++i) {
        const auto v = L2Normalize(items.vectors.row(i));
        std::copy(v.begin(), v.end(), items.vectors.row(i).begin());
      }
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto row = items.vectors.row(i);
      raw.emplace_back(row.begin(), row.end());
    }
  } else {
    model = ParseModel(ReadFile(o.model));
    FeatureDataset data = ParseDatasetCsv(ReadFile(o.eval_dataset), classes);
    if (data.samples.empty()) throw Error("dataset is empty");
    if (data.input_dim != model->model.input_dim()) {
      throw Error("dimension mismatch: dataset has " +
                  std::to_string(data.input_dim) + " features, model expects " +
                  std::to_string(model->model.input_dim()));
    }
    items.vectors = Matrix(data.samples.size(), model->model.embed_dim());
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      items.ids.push_back(static_cast<std::int64_t>(i));
      items.labels.push_back(data.samples[i].label);
      const auto v = Embed(model->model, data.samples[i].features);
      std::copy(v.begin(), v.end(), items.vectors.row(i).begin());
      raw.push_back(std::move(data.samples[i].features));
    }
  }
  if (items.size() == 0) throw Error("dataset is empty");

  EvalOptions options;
  options.K = o.K;
  EvalReport report = EvaluateRetrieval(items, s, options);

  if (!o.eval_embeddings.empty()) {
    const EmbeddingMatrix phi = ParseEmbeddings(ReadFile(o.eval_embeddings));
    const std::vector<std::size_t> to_class = MatchClasses(phi, classes);
    std::vector<std::pair<std::size_t, std::size_t>> predictions;
    for (std::size_t i = 0; i < items.size(); ++i) {
      std::size_t predicted = 0;
      if (model && model->model.head) {
        predicted = ClassifySoftmax(model->model, raw[i]);
        if (predicted >= to_class.size()) {
          throw Error("model head has more classes than the embeddings");
        }
      } else if (model) {
        predicted = ClassifyNearestCentroid(model->model, phi, raw[i]);
      } else {
        if (items.vectors.cols() != phi.dim()) {
          throw Error("dimension mismatch: features have " +
                      std::to_string(items.vectors.cols()) +
                      " columns, embeddings " + std::to_string(phi.dim()));
        }
        double best = 0.0;
        for (std::size_t c = 0; c < phi.num_classes(); ++c) {
          const double score = Dot(items.vectors.row(i), phi.row(c));
          if (c == 0 || score > best) {
            best = score;
            predicted = c;
          }
        }
      }
      predictions.emplace_back(items.labels[i], to_class[predicted]);
    }
    report.balanced_accuracy = BalancedAccuracy(predictions, s.size()).value;
  }

  const std::string summary = FormatEvalSummary(report);
  if (!o.curve_out.empty()) WriteFile(o.curve_out, FormatHpCurveCsv(report));
  if (!o.summary_out.empty()) WriteFile(o.summary_out, summary);
  out << summary;
  for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

int RunDemo(const Options& o, std::ostream& out, bool color) {
  ExperimentOptions options = o.demo;
  options.train.schedule = ParseSchedule(o.demo_schedule);
  options.train.Validate();
  const ExperimentResult result = RunSyntheticExperiment(options);
  const std::string table = FormatExperimentTable(result);
  if (!color) {
    out << table;
    return kExitOk;
  }
  const std::size_t first = table.find('\n') + 1;
  const std::size_t second = table.find('\n', first);
  out << table.substr(0, first) << "\033[1m"
      << table.substr(first, second - first) << "\033[0m"
      << table.substr(second);
  return kExitOk;
}

void AddTrainFlags(CLI::App* app, TrainConfig& c, std::string& schedule) {
  app->add_option("--epochs", c.epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--batch-size", c.batch_size, "Mini-batch size")
      ->check(CLI::PositiveNumber);
  app->add_option("--lr", c.base_lr, "Base learning rate");
  app->add_option("--min-lr", c.min_lr, "Final learning rate of cosine schedules");
  app->add_option("--schedule", schedule, "constant | cosine | sgdr");
  app->add_option("--cycle-len", c.cycle_len, "First restart cycle (epochs)");
  app->add_option("--cycle-mult", c.cycle_multiplier, "Restart cycle growth");
  app->add_option("--lambda", c.lambda, "Weight of the classification loss");
  app->add_option("--clip", c.clip_norm, "Gradient norm clip (<= 0 disables)");
}

}  // namespace

std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::size_t sub = 0;
  while (sub < args.size() &&
         std::find(std::begin(kSubcommands), std::end(kSubcommands),
                   args[sub]) == std::end(kSubcommands)) {
    ++sub;
  }
  if (sub == args.size()) return args;

  std::vector<std::string> injected;
  std::size_t line_no = 0;
  const std::string text = ReadFile(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, path + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, path + ": empty key");
    injected.push_back("--" + key + "=" + value);
  }
  std::vector<std::string> result(args.begin(), args.begin() + sub + 1);
  result.insert(result.end(), injected.begin(), injected.end());
  result.insert(result.end(), args.begin() + sub + 1, args.end());
  return result;
}

int Run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err, bool color) {
  Options o;
  CLI::App app{"Hierarchy-based class embeddings and semantic retrieval",
               "hierembed"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_flag("--plain", o.plain, "Disable colored output (also NO_COLOR)");

  auto* validate = app.add_subcommand("validate", "Check the metric axioms");
  o.validate.Register(validate);

  auto* treeify = app.add_subcommand("treeify", "Extract a tree from a DAG");
  o.treeify.Register(treeify);
  treeify->add_option("--out", o.treeify_out, "Edge-list output (default stdout)");

  auto* embed = app.add_subcommand("embed", "Compute class embeddings");
  o.embed.Register(embed);
  embed->add_option("--out", o.embed_out, "Embedding file")->required();
  embed->add_option("--dims", o.dims, "Target dimension (eigendecomposition)")
      ->check(CLI::PositiveNumber);
  embed->add_flag("--treeify", o.embed_treeify, "Convert a DAG to a tree first");
  embed->add_option("--similarity-out", o.similarity_out,
                    "Also write the similarity matrix");

  auto* train = app.add_subcommand("train", "Train a feature mapper");
  train->add_option("--dataset", o.dataset, "CSV: label,x_1,...,x_p")->required();
  train->add_option("--embeddings", o.embeddings, "Class embedding file")
      ->required();
  train->add_option("--out", o.model_out, "Model file")->required();
  train->add_option("--log", o.log_out, "Per-epoch CSV log");
  train->add_option("--loss", o.loss, "corr | corr+cls | cls");
  train->add_option("--seed", o.train.seed, "Initialization and shuffle seed");
  train->add_flag("--verbose", o.verbose, "Per-epoch progress on stderr");
  AddTrainFlags(train, o.train, o.schedule);

  auto* eval = app.add_subcommand("eval", "Leave-one-out retrieval evaluation");
  o.eval.Register(eval);
  eval->add_option("--features", o.features, "CSV: id,label,x_1,...,x_p");
  eval->add_flag("--normalize", o.normalize, "L2-normalize --features rows");
  eval->add_option("--model", o.model, "Model file");
  eval->add_option("--dataset", o.eval_dataset, "CSV: label,x_1,...,x_p");
  eval->add_option("--embeddings", o.eval_embeddings,
                   "Class embeddings, enables balanced accuracy");
  eval->add_option("--K", o.K, "AHP cutoff")->check(CLI::PositiveNumber);
  eval->add_option("--out", o.curve_out, "HP@k curve CSV");
  eval->add_option("--summary-out", o.summary_out, "Summary file");

  auto* demo = app.add_subcommand("demo", "Synthetic end-to-end comparison");
  demo->add_option("--seed", o.demo.seed, "Taxonomy, data and training seed");
  demo->add_option("--num-classes", o.demo.num_classes, "Leaf classes")
      ->check(CLI::Range(2, 1000));
  demo->add_option("--samples", o.demo.samples_per_class, "Samples per class")
      ->check(CLI::PositiveNumber);
  demo->add_option("--input-dim", o.demo.input_dim, "Feature dimension");
  demo->add_option("--noise", o.demo.noise_sigma, "Feature noise sigma");
  demo->add_option("--K", o.demo.K, "AHP cutoff")->check(CLI::PositiveNumber);
  AddTrainFlags(demo, o.demo.train, o.demo_schedule);

  for (auto* sub : {validate, treeify, embed, train, eval, demo}) {
    sub->add_option("--config", o.config, "key=value file; flags override it");
  }

  try {
    std::vector<std::string> args = ExpandConfig(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  color = color && !o.plain;

  try {
    if (validate->parsed()) return RunValidate(o, out);
    if (treeify->parsed()) return RunTreeify(o, out);
    if (embed->parsed()) return RunEmbed(o, out);
    if (train->parsed()) return RunTrain(o, out, err);
    if (eval->parsed()) return RunEval(o, out, err);
    if (demo->parsed()) return RunDemo(o, out, color);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace hierembed::cli
