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

#ifndef VFLOW_GEOMETRY_H_
#define VFLOW_GEOMETRY_H_

#include <variant>

namespace vflow {

// Axis-aligned box given by its top-left corner, width and height. Units are
// whatever the caller uses (pixels or normalized); widths are continuous, so
// width == xmax - xmin with no +1 pixel correction.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// PASCAL VOC style corner pair.
struct CornerBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  friend bool operator==(const CornerBox&, const CornerBox&) = default;
};

// YOLO style center/size box, every value normalized to [0, 1].
struct CenterBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const CenterBox&, const CenterBox&) = default;
};

enum class BoxFormat { kTopLeftWH, kCornerPair, kCenterNormalized };

using AnyBox = std::variant<BoundingBox, CornerBox, CenterBox>;

struct ImageSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

BoxFormat FormatOf(const AnyBox& box);

// Validation against the format's invariants. Throws Error(kInvalidBox).
void ValidateBox(const BoundingBox& box);
void ValidateBox(const CornerBox& box);
void ValidateBox(const CenterBox& box);

// Throws Error(kInvalidImageSize) unless both dimensions are positive.
void ValidateImageSize(ImageSize size);

BoundingBox ToTopLeft(const CornerBox& box);
CornerBox ToCorners(const BoundingBox& box);

// Pixel <-> normalized center conversions for an image of the given size.
CenterBox ToCenterNormalized(const BoundingBox& box, ImageSize size);
CenterBox ToCenterNormalized(const CornerBox& box, ImageSize size);
BoundingBox FromCenterNormalized(const CenterBox& box, ImageSize size);

// Converts `box` into `to`, preserving the geometric region. Validates both
// the input box and the image size.
AnyBox ConvertBox(const AnyBox& box, BoxFormat to, ImageSize size);

// Intersection area over union area. Returns 0 when the union is empty,
// except for two identical degenerate boxes which return 1.
double Iou(const BoundingBox& a, const BoundingBox& b);

BoundingBox Translate(const BoundingBox& box, double dx, double dy);
BoundingBox Scale(const BoundingBox& box, double factor);

}  // namespace vflow

#endif  // VFLOW_GEOMETRY_H_
