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

#ifndef VFLOW_EVALUATE_H_
#define VFLOW_EVALUATE_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vflow/class_map.h"
#include "vflow/confusion.h"
#include "vflow/dataset.h"
#include "vflow/eval.h"

namespace vflow {

struct EvalConfig {
  // Threshold for the headline AP, P, R and PR curves.
  double iou_threshold = 0.5;
  double confusion_iou_threshold = 0.5;
  double confusion_confidence_threshold = 0.25;
  // When set, P and R are reported at this confidence instead of at the
  // per-class F1 maximum.
  std::optional<double> fixed_confidence;
};

// One line of a Table-1 style report.
struct MetricsRow {
  std::string name;
  std::size_t instances = 0;
  double precision = 0.0;
  double recall = 0.0;
  double map50 = 0.0;
  double map50_95 = 0.0;
};

// "all" row: instance total and unweighted means of the metric columns.
// Throws Error(kInvalidInput) for an empty span.
MetricsRow MacroAverage(std::span<const MetricsRow> rows);

struct ClassEvaluation {
  ClassId class_id = 0;
  MetricsRow row;
  OperatingPoint operating_point;
  // AP at each of IouThresholds().
  std::array<double, kIouThresholdCount> ap_by_threshold{};
  PrCurve pr_curve;
};

struct EvalReport {
  EvalConfig config;
  MetricsRow all;
  // Classes with at least one ground-truth instance, in class-map order.
  std::vector<ClassEvaluation> classes;
  ConfusionMatrix confusion{0};
  std::size_t images = 0;
  std::size_t detections = 0;

  // "all" first, then one row per class, matching the reference table layout.
  std::vector<MetricsRow> Rows() const;
};

// Evaluates `detections` against the test split of `manifest`. Every
// detection must name a test image and a valid class with confidence in
// [0, 1]; otherwise Error(kInvalidInput).
EvalReport Evaluate(std::span<const Detection> detections,
                    const DatasetManifest& manifest, const ClassMap& classes,
                    const EvalConfig& config = {});

}  // namespace vflow

#endif  // VFLOW_EVALUATE_H_
