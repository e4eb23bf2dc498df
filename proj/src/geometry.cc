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

#include "vflow/geometry.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vflow/error.h"

namespace vflow {
namespace {

constexpr double kNormalizedSlack = 1e-9;

std::string Describe(double a, double b, double c, double d) {
  std::ostringstream out;
  out << "(" << a << ", " << b << ", " << c << ", " << d << ")";
  return out.str();
}

bool AllFinite(double a, double b, double c, double d) {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
         std::isfinite(d);
}

}  // namespace

BoxFormat FormatOf(const AnyBox& box) {
  return static_cast<BoxFormat>(box.index());
}

void ValidateBox(const BoundingBox& box) {
  if (!AllFinite(box.x, box.y, box.w, box.h) || box.w < 0.0 || box.h < 0.0) {
    throw Error(ErrorCode::kInvalidBox,
                "top-left box " + Describe(box.x, box.y, box.w, box.h));
  }
}

void ValidateBox(const CornerBox& box) {
  if (!AllFinite(box.xmin, box.ymin, box.xmax, box.ymax) ||
      box.xmax < box.xmin || box.ymax < box.ymin) {
    throw Error(ErrorCode::kInvalidBox,
                "corner box " +
                    Describe(box.xmin, box.ymin, box.xmax, box.ymax));
  }
}

void ValidateBox(const CenterBox& box) {
  auto in_unit = [](double v) {
    return v >= -kNormalizedSlack && v <= 1.0 + kNormalizedSlack;
  };
  if (!AllFinite(box.cx, box.cy, box.w, box.h) || !in_unit(box.cx) ||
      !in_unit(box.cy) || !in_unit(box.w) || !in_unit(box.h)) {
    throw Error(ErrorCode::kInvalidBox,
                "normalized box " + Describe(box.cx, box.cy, box.w, box.h));
  }
}

void ValidateImageSize(ImageSize size) {
  if (size.width <= 0 || size.height <= 0) {
    throw Error(ErrorCode::kInvalidImageSize,
                std::to_string(size.width) + "x" + std::to_string(size.height));
  }
}

BoundingBox ToTopLeft(const CornerBox& box) {
  return {box.xmin, box.ymin, box.xmax - box.xmin, box.ymax - box.ymin};
}

CornerBox ToCorners(const BoundingBox& box) {
  return {box.x, box.y, box.x + box.w, box.y + box.h};
}

CenterBox ToCenterNormalized(const CornerBox& box, ImageSize size) {
  const double width = size.width;
  const double height = size.height;
  return {(box.xmin + box.xmax) / 2.0 / width,
          (box.ymin + box.ymax) / 2.0 / height,
          (box.xmax - box.xmin) / width, (box.ymax - box.ymin) / height};
}

CenterBox ToCenterNormalized(const BoundingBox& box, ImageSize size) {
  const double width = size.width;
  const double height = size.height;
  return {(box.x + box.w / 2.0) / width, (box.y + box.h / 2.0) / height,
          box.w / width, box.h / height};
}

BoundingBox FromCenterNormalized(const CenterBox& box, ImageSize size) {
  const double width = size.width;
  const double height = size.height;
  return {(box.cx - box.w / 2.0) * width, (box.cy - box.h / 2.0) * height,
          box.w * width, box.h * height};
}

AnyBox ConvertBox(const AnyBox& box, BoxFormat to, ImageSize size) {
  ValidateImageSize(size);
  std::visit([](const auto& b) { ValidateBox(b); }, box);

  // Route everything through top-left pixel space, except the two direct
  // corner/center conversions which avoid one rounding step.
  if (const auto* corners = std::get_if<CornerBox>(&box);
      corners != nullptr && to == BoxFormat::kCenterNormalized) {
    return ToCenterNormalized(*corners, size);
  }
  if (const auto* center = std::get_if<CenterBox>(&box);
      center != nullptr && to == BoxFormat::kCornerPair) {
    const double width = size.width;
    const double height = size.height;
    return CornerBox{(center->cx - center->w / 2.0) * width,
                     (center->cy - center->h / 2.0) * height,
                     (center->cx + center->w / 2.0) * width,
                     (center->cy + center->h / 2.0) * height};
  }

  BoundingBox top_left = std::visit(
      [size](const auto& b) -> BoundingBox {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, BoundingBox>) {
          return b;
        } else if constexpr (std::is_same_v<T, CornerBox>) {
          return ToTopLeft(b);
        } else {
          return FromCenterNormalized(b, size);
        }
      },
      box);

  switch (to) {
    case BoxFormat::kTopLeftWH:
      return top_left;
    case BoxFormat::kCornerPair:
      return ToCorners(top_left);
    case BoxFormat::kCenterNormalized:
      return ToCenterNormalized(top_left, size);
  }
  return top_left;
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  const double intersection =
      (ix > 0.0 && iy > 0.0) ? ix * iy : 0.0;
  const double area_a = (a.right() - a.x) * (a.bottom() - a.y);
  const double area_b = (b.right() - b.x) * (b.bottom() - b.y);
  const double union_area = area_a + area_b - intersection;
  if (!(union_area > 0.0)) {
    return a == b ? 1.0 : 0.0;
  }
  return std::clamp(intersection / union_area, 0.0, 1.0);
}

BoundingBox Translate(const BoundingBox& box, double dx, double dy) {
  return {box.x + dx, box.y + dy, box.w, box.h};
}

BoundingBox Scale(const BoundingBox& box, double factor) {
  return {box.x * factor, box.y * factor, box.w * factor, box.h * factor};
}

}  // namespace vflow
