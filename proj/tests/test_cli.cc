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
#include <filesystem>
#include <sstream>

#include "cli.h"
#include "hierembed/embedding.h"
#include "hierembed/io.h"
#include "hierembed/similarity.h"
#include "hierembed/synthetic.h"
#include "hierembed/taxonomy.h"

namespace hierembed {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args, bool color = false) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::Run(args, out, err, color);
  return {code, out.str(), err.str()};
}

std::string Data(const std::string& name) {
  return std::string(HIEREMBED_DATA_DIR) + "/" + name;
}

double ValueAfter(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size()));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hierembed_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                  ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // Writes the 20-class synthetic fixture and its exact embeddings.
  void WriteSynthetic(double sigma, std::uint64_t stream, const std::string& csv) {
    const Taxonomy t = ParseTaxonomy(ReadFile(Data("synthetic20.edges")));
    const EmbeddingMatrix phi = ComputeEmbeddings(ComputeSimilarityMatrix(t));
    SyntheticOptions o;
    o.noise_sigma = sigma;
    o.stream = stream;
    o.samples_per_class = 20;
    WriteFile(Path(csv), FormatDatasetCsv(GenerateSyntheticDataset(phi, o)));
  }

  fs::path dir_;
};

TEST_F(CliTest, ValidateExitCodes) {
  Result r = RunCli({"validate", Data("toy.edges")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("metric: OK"), std::string::npos);

  r = RunCli({"validate", Data("golfcart.edges")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("triangle_inequality car golfcart golf_ball"),
            std::string::npos);

  WriteFile(Path("bad.edges"), "a b\na b c\n");
  r = RunCli({"validate", Path("bad.edges")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);

  r = RunCli({"validate", Path("missing.edges")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST_F(CliTest, TreeifyWritesTree) {
  Result r = RunCli({"treeify", Data("golfcart.edges"), "--out", Path("t.edges")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"validate", Path("t.edges")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("tree: yes"), std::string::npos);
}

TEST_F(CliTest, EmbedExactAndLowDim) {
  Result r = RunCli({"embed", Data("toy.edges"), "--classes", Data("toy.classes"),
                     "--out", Path("toy.emb"), "--similarity-out", Path("toy.sim")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("classes: 3"), std::string::npos);
  EXPECT_NE(r.out.find("dims: 3"), std::string::npos);
  EXPECT_LE(ValueAfter(r.out, "reconstruction_error: "), 1e-10);
  const EmbeddingMatrix phi = ParseEmbeddings(ReadFile(Path("toy.emb")));
  const SimilarityMatrix s = ParseSimilarityMatrix(ReadFile(Path("toy.sim")));
  EXPECT_EQ(phi.num_classes(), 3u);
  EXPECT_EQ(phi.dim(), 3u);
  EXPECT_LE(ReconstructionError(phi, s), 1e-12);

  r = RunCli({"embed", Data("toy.edges"), "--classes", Data("toy.classes"),
              "--out", Path("toy2.emb"), "--dims", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("dims: 2"), std::string::npos);
  EXPECT_EQ(ParseEmbeddings(ReadFile(Path("toy2.emb"))).dim(), 2u);
  EXPECT_GT(ValueAfter(r.out, "reconstruction_error: "), 1e-3);
}

TEST_F(CliTest, EmbedRejectsDagUnlessTreeified) {
  Result r = RunCli({"embed", Data("golfcart.edges"), "--out", Path("g.emb")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("not a tree"), std::string::npos);
  EXPECT_FALSE(fs::exists(Path("g.emb")));

  r = RunCli({"embed", Data("golfcart.edges"), "--out", Path("g.emb"), "--treeify"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_LE(ValueAfter(r.out, "reconstruction_error: "), 1e-10);

  r = RunCli({"embed", Data("golfcart.edges"), "--out", Path("g2.emb"), "--dims", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, TrainLowLossDeterministicAndZeroEpochs) {
  ASSERT_EQ(RunCli({"embed", Data("synthetic20.edges"), "--out", Path("e.emb")}).code, 0);
  WriteSynthetic(0.05, 0, "train.csv");
  const std::vector<std::string> base = {"train", "--dataset", Path("train.csv"),
                                         "--embeddings", Path("e.emb")};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return RunCli(args);
  };
  Result r = with({"--out", Path("m1.txt"), "--log", Path("log.csv"),
                   "--epochs", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(ValueAfter(r.out, "final_loss_corr: "), 0.05);
  EXPECT_EQ(ReadFile(Path("log.csv")).substr(0, 38),
            "epoch,lr,loss_corr,loss_cls,loss_total");

  ASSERT_EQ(with({"--out", Path("m2.txt"), "--epochs", "100"}).code, 0);
  EXPECT_EQ(ReadFile(Path("m1.txt")), ReadFile(Path("m2.txt")));

  ASSERT_EQ(with({"--out", Path("m0.txt"), "--epochs", "0", "--seed", "9"}).code, 0);
  const EmbeddingMatrix phi = ParseEmbeddings(ReadFile(Path("e.emb")));
  EXPECT_EQ(ReadFile(Path("m0.txt")),
            FormatModel({InitializeModel(32, phi.dim(), 0, 9), phi.num_classes(),
                         LossMode::kCorr}));

  r = with({"--out", Path("mc.txt"), "--epochs", "3", "--loss", "corr+cls"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("final_loss_cls: "), std::string::npos);
  EXPECT_EQ(ParseModel(ReadFile(Path("mc.txt"))).loss_mode, LossMode::kCorrPlusCls);
}

TEST_F(CliTest, TrainUnknownLabel) {
  ASSERT_EQ(RunCli({"embed", Data("toy.edges"), "--classes", Data("toy.classes"),
                    "--out", Path("toy.emb")}).code, 0);
  WriteFile(Path("d.csv"), "dog,1,0,0\nunicorn,0,1,0\n");
  const Result r = RunCli({"train", "--dataset", Path("d.csv"), "--embeddings",
                           Path("toy.emb"), "--out", Path("m.txt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unicorn"), std::string::npos);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, EvalPerfectFeaturesAndClipping) {
  ASSERT_EQ(RunCli({"embed", Data("toy.edges"), "--classes", Data("toy.classes"),
                    "--out", Path("toy.emb")}).code, 0);
  const EmbeddingMatrix phi = ParseEmbeddings(ReadFile(Path("toy.emb")));
  LabeledVectors items;
  items.vectors = Matrix(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    items.ids.push_back(static_cast<std::int64_t>(i));
    items.labels.push_back(i % 3);
    std::copy(phi.row(i % 3).begin(), phi.row(i % 3).end(),
              items.vectors.row(i).begin());
  }
  WriteFile(Path("db.csv"), FormatDatabaseCsv(items, phi.class_order()));
  const Result r = RunCli({"eval", Data("toy.edges"), "--classes", Data("toy.classes"),
                           "--features", Path("db.csv"), "--embeddings",
                           Path("toy.emb"), "--out", Path("hp.csv"),
                           "--summary-out", Path("summary.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ValueAfter(r.out, "mAHP@5: "), 1.0);
  EXPECT_EQ(ValueAfter(r.out, "balanced_accuracy: "), 1.0);
  EXPECT_NE(r.err.find("clipped to 5"), std::string::npos);
  EXPECT_NE(r.out.find("warning: K=250"), std::string::npos);
  EXPECT_EQ(ReadFile(Path("summary.txt")), r.out);
  EXPECT_EQ(ReadFile(Path("hp.csv")).substr(0, 9), "k,hp\n1,1\n");
}

TEST_F(CliTest, EvalTrainedModelBeatsRawFeatures) {
  ASSERT_EQ(RunCli({"embed", Data("synthetic20.edges"), "--out", Path("e.emb")}).code, 0);
  WriteSynthetic(0.15, 0, "train.csv");
  WriteSynthetic(0.15, 1, "test.csv");
  ASSERT_EQ(RunCli({"train", "--dataset", Path("train.csv"), "--embeddings",
                    Path("e.emb"), "--out", Path("m.txt"), "--lr", "2"}).code, 0);
  const Result model = RunCli({"eval", Data("synthetic20.edges"), "--model",
                               Path("m.txt"), "--dataset", Path("test.csv"),
                               "--K", "100", "--embeddings", Path("e.emb")});
  ASSERT_EQ(model.code, 0) << model.err;

  const FeatureDataset test = ParseDatasetCsv(
      ReadFile(Path("test.csv")),
      ParseEmbeddings(ReadFile(Path("e.emb"))).class_order());
  LabeledVectors raw;
  raw.vectors = Matrix(test.samples.size(), test.input_dim);
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    raw.ids.push_back(static_cast<std::int64_t>(i));
    raw.labels.push_back(test.samples[i].label);
    std::copy(test.samples[i].features.begin(), test.samples[i].features.end(),
              raw.vectors.row(i).begin());
  }
  WriteFile(Path("raw.csv"), FormatDatabaseCsv(raw, test.class_names));
  const Result baseline = RunCli({"eval", Data("synthetic20.edges"), "--features",
                                  Path("raw.csv"), "--normalize", "--K", "100"});
  ASSERT_EQ(baseline.code, 0) << baseline.err;
  EXPECT_GT(ValueAfter(model.out, "mAHP@100: "),
            ValueAfter(baseline.out, "mAHP@100: "));
  EXPECT_GT(ValueAfter(model.out, "balanced_accuracy: "), 0.9);
}

TEST_F(CliTest, EvalErrors) {
  ASSERT_EQ(RunCli({"embed", Data("synthetic20.edges"), "--out", Path("e.emb")}).code, 0);
  WriteSynthetic(0.15, 0, "train.csv");
  ASSERT_EQ(RunCli({"train", "--dataset", Path("train.csv"), "--embeddings",
                    Path("e.emb"), "--out", Path("m.txt"), "--epochs", "0"}).code, 0);
  WriteFile(Path("narrow.csv"), "c0000,1,2,3\nc0001,1,2,3\n");
  Result r = RunCli({"eval", Data("synthetic20.edges"), "--model", Path("m.txt"),
                     "--dataset", Path("narrow.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("dimension mismatch"), std::string::npos);

  WriteFile(Path("empty.csv"), "# nothing\n");
  r = RunCli({"eval", Data("synthetic20.edges"), "--model", Path("m.txt"),
              "--dataset", Path("empty.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("empty"), std::string::npos);

  r = RunCli({"eval", Data("synthetic20.edges")});
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, DemoIsDeterministic) {
  const Result a = RunCli({"demo", "--seed", "5", "--epochs", "10"});
  const Result b = RunCli({"demo", "--seed", "5", "--epochs", "10"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("L_CORR+CLS"), std::string::npos);
  const Result c = RunCli({"demo", "--seed", "6", "--epochs", "10"});
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, ColorAndPlain) {
  const Result colored = RunCli({"demo", "--epochs", "1", "--num-classes", "4"}, true);
  EXPECT_NE(colored.out.find("\033[1m"), std::string::npos);
  const Result plain =
      RunCli({"--plain", "demo", "--epochs", "1", "--num-classes", "4"}, true);
  EXPECT_EQ(plain.out.find('\033'), std::string::npos);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  ASSERT_EQ(RunCli({"embed", Data("toy.edges"), "--classes", Data("toy.classes"),
                    "--out", Path("toy.emb")}).code, 0);
  WriteFile(Path("d.csv"), "dog,1,0,0\ncat,0,1,0\ntrout,0,0,1\n");
  WriteFile(Path("run.cfg"), "# training\nepochs = 0\nseed=3\nloss=corr+cls\n");
  const std::vector<std::string> base = {"train", "--config", Path("run.cfg"),
                                         "--dataset", Path("d.csv"), "--embeddings",
                                         Path("toy.emb")};
  std::vector<std::string> args = base;
  args.insert(args.end(), {"--out", Path("a.txt")});
  Result r = RunCli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("epochs: 0"), std::string::npos);
  EXPECT_EQ(ParseModel(ReadFile(Path("a.txt"))).model, InitializeModel(3, 3, 3, 3));

  args = base;
  args.insert(args.end(), {"--out", Path("b.txt"), "--epochs", "2"});
  r = RunCli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("epochs: 2"), std::string::npos);

  WriteFile(Path("bad.cfg"), "epochs\n");
  args = base;
  args[2] = Path("bad.cfg");
  args.insert(args.end(), {"--out", Path("c.txt")});
  EXPECT_EQ(RunCli(args).code, 1);
}

TEST_F(CliTest, InputsAreNotModified) {
  const std::string before = ReadFile(Data("golfcart.edges"));
  RunCli({"validate", Data("golfcart.edges")});
  RunCli({"treeify", Data("golfcart.edges")});
  RunCli({"embed", Data("golfcart.edges"), "--treeify", "--out", Path("x.emb")});
  EXPECT_EQ(ReadFile(Data("golfcart.edges")), before);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(RunCli({}).code, 1);
  EXPECT_EQ(RunCli({"frobnicate"}).code, 1);
  EXPECT_EQ(RunCli({"embed", Data("toy.edges")}).code, 1);  // --out missing
  EXPECT_EQ(RunCli({"train", "--dataset", "a", "--embeddings", "b", "--out", "c",
                    "--loss", "mse"}).code, 1);
  const Result help = RunCli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("validate"), std::string::npos);
}

}  // namespace
}  // namespace hierembed
