// Copyright 2026 The vflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "vflow/evaluate.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"
#include "oracles.h"
#include "reference_results.h"
#include "vflow/error.h"
#include "vflow/eval_io.h"

namespace vflow {
namespace {

const ClassMap kClasses = ClassMap::Default();

// Random test-split manifest: `n` images of 640x480 with up to 6 objects.
DatasetManifest RandomManifest(std::mt19937_64& rng, std::size_t n) {
  DatasetManifest manifest;
  for (std::size_t i = 0; i < n; ++i) {
    ImageRecord record;
    record.id = "img" + std::to_string(i);
    record.size = {640, 480};
    const auto image = testing::MakeRandomImage(rng, 6, 0, kClasses.size());
    for (auto gt : image.gts) {
      gt.box = {gt.box.x * 3, gt.box.y * 2, gt.box.w * 3, gt.box.h * 2};
      record.annotations.push_back(gt);
    }
    manifest.records.push_back(std::move(record));
    manifest.splits.push_back(Split::kTest);
  }
  return manifest;
}

std::vector<Detection> PerfectDetections(const DatasetManifest& manifest) {
  std::vector<Detection> dets;
  for (const auto& r : manifest.records) {
    for (const auto& gt : r.annotations) {
      dets.push_back({r.id, gt.class_id, 1.0, gt.box});
    }
  }
  return dets;
}

std::vector<Detection> NoisyDetections(std::mt19937_64& rng,
                                       const DatasetManifest& manifest) {
  std::vector<Detection> dets;
  std::uniform_real_distribution<double> conf(0.05, 1.0);
  std::bernoulli_distribution keep(0.8);
  for (const auto& r : manifest.records) {
    for (const auto& gt : r.annotations) {
      if (keep(rng)) {
        dets.push_back({r.id, gt.class_id, conf(rng),
                        testing::Jitter(rng, gt.box)});
      }
    }
    dets.push_back({r.id, 4, conf(rng), testing::RandomBox(rng)});
  }
  return dets;
}

TEST(MacroAverageTest, ReferenceClassRows) {
  const auto rows = testing::ReferenceClassRows();
  const MetricsRow all = MacroAverage(rows);
  const MetricsRow published = testing::ReferenceAllRow();
  EXPECT_EQ(all.name, "all");
  EXPECT_EQ(all.instances, published.instances);
  EXPECT_NEAR(all.precision, published.precision, testing::kReferenceTolerance);
  EXPECT_NEAR(all.recall, published.recall, testing::kReferenceTolerance);
  EXPECT_NEAR(all.map50, published.map50, testing::kReferenceTolerance);
  // Exact arithmetic mean of the published 3-decimal column.
  EXPECT_NEAR(all.map50_95, 10.972 / 15.0, 1e-12);
}

TEST(MacroAverageTest, ReferenceMap50ColumnThroughMeanAp) {
  std::vector<double> column;
  for (const auto& r : testing::ReferenceClassRows()) column.push_back(r.map50);
  EXPECT_NEAR(MeanAveragePrecision(column), 0.934, testing::kReferenceTolerance);
}

TEST(MacroAverageTest, EmptyIsInvalid) {
  EXPECT_THROW(MacroAverage({}), Error);
}

TEST(EvaluateTest, PerfectDetectorScoresOne) {
  std::mt19937_64 rng(1);
  const DatasetManifest manifest = RandomManifest(rng, 40);
  const auto dets = PerfectDetections(manifest);
  const EvalReport report = Evaluate(dets, manifest, kClasses);
  ASSERT_FALSE(report.classes.empty());
  for (const auto& row : report.Rows()) {
    EXPECT_EQ(row.precision, 1.0) << row.name;
    EXPECT_EQ(row.recall, 1.0) << row.name;
    EXPECT_EQ(row.map50, 1.0) << row.name;
    EXPECT_EQ(row.map50_95, 1.0) << row.name;
  }
  const ConfusionMatrix& m = report.confusion;
  for (std::size_t r = 0; r < m.dimension(); ++r) {
    for (std::size_t c = 0; c < m.dimension(); ++c) {
      if (r != c) {
        EXPECT_EQ(m.at(r, c), 0u);
      }
    }
  }
  EXPECT_EQ(m.at(m.background(), m.background()), 0u);
  EXPECT_EQ(m.Total(), dets.size());
}

TEST(EvaluateTest, EmptyDetectionsScoreZero) {
  std::mt19937_64 rng(2);
  const DatasetManifest manifest = RandomManifest(rng, 20);
  const EvalReport report = Evaluate({}, manifest, kClasses);
  for (const auto& row : report.Rows()) {
    EXPECT_EQ(row.precision, 0.0);
    EXPECT_EQ(row.recall, 0.0);
    EXPECT_EQ(row.map50, 0.0);
    EXPECT_EQ(row.map50_95, 0.0);
  }
}

TEST(EvaluateTest, RowsOnlyForClassesWithGroundTruth) {
  DatasetManifest manifest;
  manifest.records.push_back({"a", {100, 100}, {{3, {0, 0, 10, 10}}}});
  manifest.splits.push_back(Split::kTest);
  const std::vector<Detection> dets{{"a", 5, 0.9, {50, 50, 10, 10}}};
  const EvalReport report = Evaluate(dets, manifest, kClasses);
  ASSERT_EQ(report.classes.size(), 1u);
  EXPECT_EQ(report.classes[0].row.name, "bus");
  EXPECT_EQ(report.Rows().front().name, "all");
  EXPECT_EQ(report.confusion.at(report.confusion.background(), 5), 1u);
}

TEST(EvaluateTest, OnlyTestSplitCounts) {
  DatasetManifest manifest;
  manifest.records.push_back({"train", {100, 100}, {{3, {0, 0, 10, 10}}}});
  manifest.splits.push_back(Split::kTrain);
  manifest.records.push_back({"test", {100, 100}, {{4, {0, 0, 10, 10}}}});
  manifest.splits.push_back(Split::kTest);
  const EvalReport report = Evaluate({}, manifest, kClasses);
  EXPECT_EQ(report.images, 1u);
  ASSERT_EQ(report.classes.size(), 1u);
  EXPECT_EQ(report.classes[0].class_id, 4u);
  const std::vector<Detection> dets{{"train", 3, 0.9, {0, 0, 10, 10}}};
  EXPECT_THROW(Evaluate(dets, manifest, kClasses), Error);
}

TEST(EvaluateTest, RejectsBadConfig) {
  DatasetManifest manifest;
  EvalConfig config;
  config.iou_threshold = 0.0;
  EXPECT_THROW(Evaluate({}, manifest, kClasses, config), Error);
  config = {};
  config.fixed_confidence = 1.5;
  EXPECT_THROW(Evaluate({}, manifest, kClasses, config), Error);
}

TEST(EvaluateTest, HeadlineMapEqualsAverageOfClassAps) {
  std::mt19937_64 rng(3);
  const DatasetManifest manifest = RandomManifest(rng, 60);
  const auto dets = NoisyDetections(rng, manifest);
  const EvalReport report = Evaluate(dets, manifest, kClasses);
  double sum = 0.0, sum_range = 0.0;
  for (const auto& c : report.classes) {
    EXPECT_NEAR(c.row.map50, c.ap_by_threshold[0], 1e-12);
    sum += c.row.map50;
    sum_range += c.row.map50_95;
    EXPECT_LE(c.row.map50_95, c.row.map50 + 1e-12);
  }
  const double n = static_cast<double>(report.classes.size());
  EXPECT_NEAR(report.all.map50, sum / n, 1e-12);
  EXPECT_NEAR(report.all.map50_95, sum_range / n, 1e-12);
}

TEST(EvaluateTest, DetectionOrderDoesNotMatter) {
  std::mt19937_64 rng(4);
  const DatasetManifest manifest = RandomManifest(rng, 30);
  auto dets = NoisyDetections(rng, manifest);
  const EvalReport a = Evaluate(dets, manifest, kClasses);
  std::shuffle(dets.begin(), dets.end(), rng);
  const EvalReport b = Evaluate(dets, manifest, kClasses);
  ASSERT_EQ(a.classes.size(), b.classes.size());
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    EXPECT_DOUBLE_EQ(a.classes[i].row.map50, b.classes[i].row.map50);
    EXPECT_DOUBLE_EQ(a.classes[i].row.map50_95, b.classes[i].row.map50_95);
  }
  EXPECT_EQ(a.confusion, b.confusion);
}

TEST(EvaluateTest, ScaleInvariant) {
  std::mt19937_64 rng(5);
  const DatasetManifest manifest = RandomManifest(rng, 30);
  const auto dets = NoisyDetections(rng, manifest);
  DatasetManifest scaled = manifest;
  for (auto& r : scaled.records) {
    r.size = {r.size.width * 4, r.size.height * 4};
    for (auto& gt : r.annotations) gt.box = Scale(gt.box, 4.0);
  }
  auto scaled_dets = dets;
  for (auto& d : scaled_dets) d.box = Scale(d.box, 4.0);
  const EvalReport a = Evaluate(dets, manifest, kClasses);
  const EvalReport b = Evaluate(scaled_dets, scaled, kClasses);
  EXPECT_NEAR(a.all.map50, b.all.map50, 1e-9);
  EXPECT_NEAR(a.all.map50_95, b.all.map50_95, 1e-9);
}

TEST(EvaluateTest, FixedConfidenceOperatingPoint) {
  DatasetManifest manifest;
  manifest.records.push_back(
      {"a", {100, 100}, {{0, {0, 0, 10, 10}}, {0, {50, 50, 10, 10}}}});
  manifest.splits.push_back(Split::kTest);
  const std::vector<Detection> dets{{"a", 0, 0.9, {0, 0, 10, 10}},
                                    {"a", 0, 0.3, {50, 50, 10, 10}}};
  EvalConfig config;
  config.fixed_confidence = 0.5;
  const EvalReport report = Evaluate(dets, manifest, kClasses, config);
  EXPECT_EQ(report.all.precision, 1.0);
  EXPECT_EQ(report.all.recall, 0.5);
  EXPECT_EQ(report.all.map50, 1.0);
}

TEST(EvalIoTest, DetectionsRoundTrip) {
  std::mt19937_64 rng(6);
  const DatasetManifest manifest = RandomManifest(rng, 10);
  auto dets = PerfectDetections(manifest);
  std::stringstream io;
  WriteDetections(dets, manifest, io);
  const auto back = ReadDetections(io, manifest, kClasses);
  ASSERT_EQ(back.size(), dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    EXPECT_EQ(back[i].image_id, dets[i].image_id);
    EXPECT_EQ(back[i].class_id, dets[i].class_id);
    EXPECT_NEAR(back[i].box.x, dets[i].box.x, 1e-9);
    EXPECT_NEAR(back[i].box.w, dets[i].box.w, 1e-9);
  }
}

TEST(EvalIoTest, DetectionsErrors) {
  DatasetManifest manifest;
  manifest.records.push_back({"a", {100, 100}, {}});
  std::istringstream unknown_image("b 0 0.5 0.5 0.5 0.1 0.1\n");
  EXPECT_THROW(ReadDetections(unknown_image, manifest, kClasses), Error);
  std::istringstream bad_class("a 15 0.5 0.5 0.5 0.1 0.1\n");
  EXPECT_THROW(ReadDetections(bad_class, manifest, kClasses), Error);
  std::istringstream short_line("a 1 0.5 0.5 0.5 0.1\n");
  EXPECT_THROW(ReadDetections(short_line, manifest, kClasses), Error);
}

TEST(EvalIoTest, MetricsCsvRoundTripAndTable) {
  auto rows = testing::ReferenceClassRows();
  rows.insert(rows.begin(), MacroAverage(rows));
  std::stringstream io;
  WriteMetricsCsv(rows, io, true);
  const auto back = ReadMetricsCsv(io);
  ASSERT_EQ(back.size(), 15u);
  EXPECT_EQ(back[7].name, "horsecart");
  EXPECT_EQ(back[7].recall, 1.0);
  EXPECT_EQ(back[14].map50_95, 0.727);

  const std::string table = FormatMetricsTable(rows);
  const auto header_end = table.find('\n');
  EXPECT_NE(table.substr(0, header_end).find("Class"), std::string::npos);
  EXPECT_LT(table.find("Instances"), table.find("mAP50-95"));
  EXPECT_EQ(table.substr(header_end + 1, 3), "all");
  EXPECT_NE(table.find("0.921"), std::string::npos);
}

TEST(EvalIoTest, ReportArtifacts) {
  std::mt19937_64 rng(7);
  const DatasetManifest manifest = RandomManifest(rng, 10);
  const EvalReport report =
      Evaluate(PerfectDetections(manifest), manifest, kClasses);
  std::ostringstream confusion;
  WriteConfusionCsv(report.confusion, kClasses, confusion, false);
  EXPECT_EQ(confusion.str().substr(0, 22), "true\\predicted,bicycle");
  EXPECT_NE(confusion.str().find("background"), std::string::npos);
  std::ostringstream curves;
  WritePrCurvesCsv(report, kClasses, curves);
  EXPECT_NE(curves.str().find(",envelope,100,1,1"), std::string::npos);
  const auto json = nlohmann::json::parse(SummaryJson(report, kClasses));
  EXPECT_EQ(json["all"]["map50"], 1.0);
  EXPECT_EQ(json["images"], 10);
}

}  // namespace
}  // namespace vflow
