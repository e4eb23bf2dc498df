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

#ifndef VFLOW_EVAL_H_
#define VFLOW_EVAL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vflow/annotation.h"
#include "vflow/class_map.h"
#include "vflow/geometry.h"

namespace vflow {

// A predicted box in top-left pixel space of image `image_id`.
struct Detection {
  std::string image_id;
  ClassId class_id = 0;
  double confidence = 0.0;
  BoundingBox box;
};

enum class DetectionLabel { kTruePositive, kFalsePositive };

// Outcome of matching one image's detections against its ground truths.
// All vectors are indexed by the caller's input order.
struct MatchResult {
  double iou_threshold = 0.5;
  std::vector<DetectionLabel> labels;
  std::vector<std::optional<std::size_t>> matched_gt;
  // For each ground truth, the detection that claimed it (FN when empty).
  std::vector<std::optional<std::size_t>> gt_matched_by;

  std::size_t true_positives(ClassId cls, std::span<const Detection> dets) const;
  std::size_t false_positives(ClassId cls, std::span<const Detection> dets) const;
  std::size_t false_negatives(ClassId cls,
                              std::span<const GroundTruth> gts) const;
};

// Greedy per-class matching. Detections are visited by descending
// confidence (input order breaks ties); each takes the unmatched same-class
// ground truth with the highest IoU >= threshold, lower index on IoU ties.
//
// Throws Error(kInvalidInput) when detections carry different image ids or
// the threshold lies outside (0, 1].
MatchResult MatchDetections(std::span<const Detection> detections,
                            std::span<const GroundTruth> ground_truths,
                            double iou_threshold);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// P = TP / (TP + FP), R = TP / (TP + FN); each is 0 when its denominator is.
PrecisionRecall ComputePrecisionRecall(std::size_t tp, std::size_t fp,
                                       std::size_t fn);

struct RankedLabel {
  double confidence = 0.0;
  bool true_positive = false;
};

inline constexpr std::size_t kRecallSamples = 101;

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
  double confidence = 0.0;
};

struct PrCurve {
  // Cumulative (recall, precision) after each ranked detection.
  std::vector<PrPoint> raw;
  // Interpolated precision at recall i / 100 for i = 0..100.
  std::array<double, kRecallSamples> envelope{};
};

// 101-point interpolated average precision. `ranked` must be sorted by
// descending confidence. With no ground truth the result is 1 for an empty
// ranking and 0 otherwise.
//
// Throws Error(kInvalidInput) on unsorted input or more true positives than
// ground truths.
double AveragePrecision(std::span<const RankedLabel> ranked,
                        std::size_t total_gt);

PrCurve ComputePrCurve(std::span<const RankedLabel> ranked,
                       std::size_t total_gt);

// Area under the 101-point envelope (the same quadrature AP uses).
double IntegrateEnvelope(const PrCurve& curve);

// Unweighted mean of per-class APs. Callers pass only classes that have at
// least one ground-truth instance. Throws Error(kInvalidInput) when empty.
double MeanAveragePrecision(std::span<const double> per_class_ap);

inline constexpr std::size_t kIouThresholdCount = 10;

// 0.50, 0.55, ..., 0.95.
std::array<double, kIouThresholdCount> IouThresholds();

// Mean over the ten thresholds per class, then mean over classes. Throws
// Error(kInvalidInput) unless every class has exactly ten values.
double MeanAveragePrecisionRange(
    std::span<const std::vector<double>> per_class_per_threshold);

struct OperatingPoint {
  double precision = 0.0;
  double recall = 0.0;
  // Confidence cutoff that produced this point; 1 when nothing is kept.
  double confidence = 1.0;
};

// Cut of the ranking (only between distinct confidences) with the highest
// F1; the higher cutoff wins ties.
OperatingPoint BestF1Point(std::span<const RankedLabel> ranked,
                           std::size_t total_gt);

// P and R over the detections with confidence >= `threshold`.
OperatingPoint PointAtConfidence(std::span<const RankedLabel> ranked,
                                 std::size_t total_gt, double threshold);

}  // namespace vflow

#endif  // VFLOW_EVAL_H_
