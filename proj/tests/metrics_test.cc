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


#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "vflow/error.h"
#include "vflow/eval.h"

namespace vflow {
namespace {

Detection Det(ClassId cls, double conf, BoundingBox box) {
  return {"img", cls, conf, box};
}

// Box with the given IoU against (0, 0, 10, 10), sharing its top-left corner
// and height: IoU = w / 10 for w <= 10.
BoundingBox WithIou(double iou) { return {0, 0, 10 * iou, 10}; }

TEST(MatchTest, HigherConfidenceWins) {
  const std::vector<GroundTruth> gts{{0, {0, 0, 10, 10}}};
  const std::vector<Detection> dets{Det(0, 0.6, WithIou(0.8)),
                                    Det(0, 0.9, WithIou(0.8))};
  const MatchResult m = MatchDetections(dets, gts, 0.5);
  EXPECT_EQ(m.labels[1], DetectionLabel::kTruePositive);
  EXPECT_EQ(m.labels[0], DetectionLabel::kFalsePositive);
  EXPECT_EQ(m.matched_gt[1], 0u);
  EXPECT_EQ(m.gt_matched_by[0], 1u);
}

TEST(MatchTest, BelowThresholdIsFalsePositive) {
  const std::vector<GroundTruth> gts{{0, {0, 0, 10, 10}}};
  const std::vector<Detection> dets{Det(0, 0.9, WithIou(0.49))};
  const MatchResult m = MatchDetections(dets, gts, 0.5);
  EXPECT_EQ(m.labels[0], DetectionLabel::kFalsePositive);
  EXPECT_EQ(m.false_negatives(0, gts), 1u);
}

TEST(MatchTest, HighestIouWins) {
  // Detection (0,0,10,10): IoU 0.6 vs GT0 (0,0,6,10) and 0.7 vs GT1 (0,0,7,10).
  const std::vector<GroundTruth> gts{{0, {0, 0, 6, 10}}, {0, {0, 0, 7, 10}}};
  const std::vector<Detection> dets{Det(0, 0.9, {0, 0, 10, 10})};
  const MatchResult m = MatchDetections(dets, gts, 0.5);
  EXPECT_EQ(m.matched_gt[0], 1u);
}

TEST(MatchTest, EqualIouPrefersLowerGtIndex) {
  const std::vector<GroundTruth> gts{{0, {0, 0, 10, 10}}, {0, {0, 0, 10, 10}}};
  const std::vector<Detection> dets{Det(0, 0.9, {0, 0, 10, 10})};
  EXPECT_EQ(MatchDetections(dets, gts, 0.5).matched_gt[0], 0u);
}

TEST(MatchTest, ClassMustAgree) {
  const std::vector<GroundTruth> gts{{1, {0, 0, 10, 10}}};
  const std::vector<Detection> dets{Det(0, 0.9, {0, 0, 10, 10})};
  const MatchResult m = MatchDetections(dets, gts, 0.5);
  EXPECT_EQ(m.labels[0], DetectionLabel::kFalsePositive);
}

TEST(MatchTest, Errors) {
  const std::vector<Detection> dets{Det(0, 0.9, {0, 0, 1, 1}),
                                    {"other", 0, 0.5, {0, 0, 1, 1}}};
  EXPECT_THROW(MatchDetections(dets, {}, 0.5), Error);
  EXPECT_THROW(MatchDetections({}, {}, 0.0), Error);
  EXPECT_THROW(MatchDetections({}, {}, 1.5), Error);
}

TEST(MatchTest, CountIdentitiesOnRandomImages) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto image = testing::MakeRandomImage(rng, 10, 20, 4);
    const MatchResult m = MatchDetections(image.dets, image.gts, 0.5);
    for (ClassId c = 0; c < 4; ++c) {
      std::size_t gt = 0, det = 0;
      for (const auto& g : image.gts) gt += g.class_id == c;
      for (const auto& d : image.dets) det += d.class_id == c;
      EXPECT_EQ(m.true_positives(c, image.dets) +
                    m.false_negatives(c, image.gts), gt);
      EXPECT_EQ(m.true_positives(c, image.dets) +
                    m.false_positives(c, image.dets), det);
    }
  }
}

TEST(PrecisionRecallTest, Examples) {
  auto pr = ComputePrecisionRecall(9, 1, 3);
  EXPECT_DOUBLE_EQ(pr.precision, 0.9);
  EXPECT_DOUBLE_EQ(pr.recall, 0.75);
  pr = ComputePrecisionRecall(0, 0, 5);
  EXPECT_EQ(pr.precision, 0.0);
  EXPECT_EQ(pr.recall, 0.0);
  pr = ComputePrecisionRecall(5, 0, 0);
  EXPECT_EQ(pr.precision, 1.0);
  EXPECT_EQ(pr.recall, 1.0);
}

const std::vector<RankedLabel> kTpFpTp{{0.9, true}, {0.8, false}, {0.7, true}};

TEST(AveragePrecisionTest, WorkedExample) {
  EXPECT_NEAR(AveragePrecision(kTpFpTp, 2), (51.0 + 50.0 * 2.0 / 3.0) / 101.0,
              1e-12);
  EXPECT_NEAR(AveragePrecision(kTpFpTp, 2), 0.834983, 1e-6);
}

TEST(AveragePrecisionTest, PerfectAndEmpty) {
  const std::vector<RankedLabel> perfect{{0.9, true}, {0.5, true}};
  EXPECT_EQ(AveragePrecision(perfect, 2), 1.0);
  const std::vector<RankedLabel> misses{{0.9, false}, {0.5, false}};
  EXPECT_EQ(AveragePrecision(misses, 3), 0.0);
  EXPECT_EQ(AveragePrecision({}, 3), 0.0);
  EXPECT_EQ(AveragePrecision({}, 0), 1.0);
  EXPECT_EQ(AveragePrecision(misses, 0), 0.0);
}

TEST(AveragePrecisionTest, RejectsBadInput) {
  const std::vector<RankedLabel> unsorted{{0.5, true}, {0.9, true}};
  EXPECT_THROW(AveragePrecision(unsorted, 2), Error);
  const std::vector<RankedLabel> too_many{{0.9, true}, {0.5, true}};
  EXPECT_THROW(AveragePrecision(too_many, 1), Error);
}

TEST(AveragePrecisionTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto r = testing::MakeRandomRanking(rng);
    EXPECT_NEAR(AveragePrecision(r.ranked, r.total_gt),
                testing::BruteForceAp(r.ranked, r.total_gt), 1e-9);
  }
}

TEST(PrCurveTest, RawPoints) {
  const PrCurve curve = ComputePrCurve(kTpFpTp, 2);
  ASSERT_EQ(curve.raw.size(), 3u);
  EXPECT_EQ(curve.raw[0].recall, 0.5);
  EXPECT_EQ(curve.raw[0].precision, 1.0);
  EXPECT_EQ(curve.raw[1].recall, 0.5);
  EXPECT_EQ(curve.raw[1].precision, 0.5);
  EXPECT_EQ(curve.raw[2].recall, 1.0);
  EXPECT_DOUBLE_EQ(curve.raw[2].precision, 2.0 / 3.0);
  EXPECT_EQ(curve.raw[2].confidence, 0.7);
  EXPECT_EQ(curve.envelope[50], 1.0);
  EXPECT_DOUBLE_EQ(curve.envelope[51], 2.0 / 3.0);

  const std::vector<RankedLabel> single{{0.4, true}};
  const PrCurve one = ComputePrCurve(single, 1);
  ASSERT_EQ(one.raw.size(), 1u);
  EXPECT_EQ(one.raw[0].recall, 1.0);
  EXPECT_EQ(one.raw[0].precision, 1.0);
}

TEST(PrCurveTest, EnvelopeIsNonIncreasingAndIntegratesToAp) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    const auto r = testing::MakeRandomRanking(rng);
    const PrCurve curve = ComputePrCurve(r.ranked, r.total_gt);
    for (std::size_t s = 1; s < kRecallSamples; ++s) {
      EXPECT_LE(curve.envelope[s], curve.envelope[s - 1]);
    }
    EXPECT_NEAR(IntegrateEnvelope(curve),
                AveragePrecision(r.ranked, r.total_gt), 1e-9);
  }
}

TEST(MeanAveragePrecisionTest, Examples) {
  const std::vector<double> constant(7, 0.42);
  EXPECT_DOUBLE_EQ(MeanAveragePrecision(constant), 0.42);
  EXPECT_THROW(MeanAveragePrecision({}), Error);
}

TEST(MeanAveragePrecisionTest, RangeExamples) {
  const auto t = IouThresholds();
  EXPECT_DOUBLE_EQ(t.front(), 0.5);
  EXPECT_DOUBLE_EQ(t.back(), 0.95);
  EXPECT_DOUBLE_EQ(t[3], 0.65);

  std::vector<std::vector<double>> same{std::vector<double>(10, 0.7)};
  EXPECT_DOUBLE_EQ(MeanAveragePrecisionRange(same), 0.7);
  std::vector<std::vector<double>> linear{
      {1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1}};
  EXPECT_NEAR(MeanAveragePrecisionRange(linear), 0.55, 1e-12);
  std::vector<std::vector<double>> single{{0.8, 0, 0, 0, 0, 0, 0, 0, 0, 0}};
  EXPECT_NEAR(MeanAveragePrecisionRange(single), 0.08, 1e-12);
  std::vector<std::vector<double>> missing{{0.8, 0.7}};
  EXPECT_THROW(MeanAveragePrecisionRange(missing), Error);
}

TEST(OperatingPointTest, BestF1OnlyCutsBetweenDistinctConfidences) {
  // Cutting inside the 0.8 tie would give a better F1 but is not allowed.
  const std::vector<RankedLabel> ranked{
      {0.9, true}, {0.8, true}, {0.8, false}, {0.8, false}, {0.1, false}};
  const OperatingPoint best = BestF1Point(ranked, 2);
  EXPECT_EQ(best.confidence, 0.9);
  EXPECT_EQ(best.precision, 1.0);
  EXPECT_EQ(best.recall, 0.5);
}

TEST(OperatingPointTest, BestF1PrefersHigherCutoffOnTie) {
  // Cut at 0.9: P=1, R=0.5, F1=2/3. Cut at 0.8: P=0.5, R=1, F1=2/3.
  const std::vector<RankedLabel> ranked{
      {0.9, true}, {0.85, false}, {0.84, false}, {0.8, true}};
  const OperatingPoint best = BestF1Point(ranked, 2);
  EXPECT_EQ(best.confidence, 0.9);
}

TEST(OperatingPointTest, FixedConfidence) {
  const OperatingPoint p = PointAtConfidence(kTpFpTp, 2, 0.75);
  EXPECT_EQ(p.precision, 0.5);
  EXPECT_EQ(p.recall, 0.5);
  const OperatingPoint none = PointAtConfidence(kTpFpTp, 2, 0.95);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
}

}  // namespace
}  // namespace vflow
