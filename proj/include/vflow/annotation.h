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

#ifndef VFLOW_ANNOTATION_H_
#define VFLOW_ANNOTATION_H_

#include <string>
#include <string_view>
#include <vector>

#include "vflow/class_map.h"
#include "vflow/geometry.h"

namespace vflow {

// A labeled box in top-left pixel space.
struct GroundTruth {
  ClassId class_id = 0;
  BoundingBox box;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

// One image and its vehicle annotations. Images with no vehicles simply have
// an empty annotation list.
struct ImageRecord {
  std::string id;
  ImageSize size;
  std::vector<GroundTruth> annotations;
};

// VOC corner coordinates beyond the image by at most this fraction of the
// relevant dimension are clamped; anything further is rejected.
inline constexpr double kVocClampFraction = 0.05;
// Normalized YOLO values within this distance of [0, 1] are clamped.
inline constexpr double kYoloClampTolerance = 1e-6;

// Parses a PASCAL VOC document. The record id is the <filename> stem when
// present. Clamping events are appended to `warnings` when non-null.
//
// Throws Error with kParseError (malformed markup, with line number),
// kUnknownClass (names the class), kInvalidAnnotation (box too far outside
// the image or inverted) or kInvalidImageSize.
ImageRecord ParseVoc(std::string_view xml, const ClassMap& classes,
                     std::vector<std::string>* warnings = nullptr);

// Parses YOLO label lines "class cx cy w h" for an image of `size`.
ImageRecord ParseYoloTxt(std::string_view text, ImageSize size,
                         const ClassMap& classes);

// One "class cx cy w h" line per annotation, shortest round-trip decimals.
std::string WriteYoloTxt(const ImageRecord& record);

// Shortest decimal that parses back to exactly `value`.
std::string FormatShortest(double value);

// Strict numeric field parsing shared by the line-oriented readers. Throws
// Error(kParseError) naming `what` on failure.
double ParseDouble(std::string_view field, std::string_view what);
long long ParseInteger(std::string_view field, std::string_view what);

// Whitespace tokenization for line-oriented formats.
std::vector<std::string_view> SplitFields(std::string_view line);

}  // namespace vflow

#endif  // VFLOW_ANNOTATION_H_
