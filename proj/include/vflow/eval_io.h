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

#ifndef VFLOW_EVAL_IO_H_
#define VFLOW_EVAL_IO_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vflow/dataset.h"
#include "vflow/evaluate.h"

namespace vflow {

// Detections file: "image_id class confidence cx cy w h" per line, boxes
// normalized like YOLO labels. Image sizes come from `manifest`.
std::vector<Detection> ReadDetections(std::istream& in,
                                      const DatasetManifest& manifest,
                                      const ClassMap& classes);
void WriteDetections(std::span<const Detection> detections,
                     const DatasetManifest& manifest, std::ostream& out);

// CSV with header Class,Instances,P,R,mAP50,mAP50-95. Numbers are printed
// with three decimals, or shortest round-trip when `full_precision`.
void WriteMetricsCsv(std::span<const MetricsRow> rows, std::ostream& out,
                     bool full_precision);
// Reads the same layout. A row named "all" is skipped.
std::vector<MetricsRow> ReadMetricsCsv(std::istream& in);

// Fixed-width console table in the same column order.
std::string FormatMetricsTable(std::span<const MetricsRow> rows);

void WriteConfusionCsv(const ConfusionMatrix& matrix, const ClassMap& classes,
                       std::ostream& out, bool normalized);

// class,kind,index,recall,precision where kind is "raw" or "envelope".
void WritePrCurvesCsv(const EvalReport& report, const ClassMap& classes,
                      std::ostream& out);

std::string SummaryJson(const EvalReport& report, const ClassMap& classes);

}  // namespace vflow

#endif  // VFLOW_EVAL_IO_H_
