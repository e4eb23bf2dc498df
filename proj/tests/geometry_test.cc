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

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "vflow/error.h"

namespace vflow {
namespace {

TEST(GeometryTest, CornerPairToCenterNormalizedWorkedExample) {
  const AnyBox out = ConvertBox(CornerBox{0, 0, 320, 320},
                                BoxFormat::kCenterNormalized, {640, 640});
  const auto& center = std::get<CenterBox>(out);
  EXPECT_EQ(center.cx, 0.25);
  EXPECT_EQ(center.cy, 0.25);
  EXPECT_EQ(center.w, 0.5);
  EXPECT_EQ(center.h, 0.5);
}

TEST(GeometryTest, FullImageCenterBoxToCorners) {
  for (ImageSize size : {ImageSize{640, 480}, ImageSize{1, 1},
                         ImageSize{1920, 1080}}) {
    const AnyBox out = ConvertBox(CenterBox{0.5, 0.5, 1.0, 1.0},
                                  BoxFormat::kCornerPair, size);
    EXPECT_EQ(std::get<CornerBox>(out),
              (CornerBox{0, 0, static_cast<double>(size.width),
                         static_cast<double>(size.height)}));
  }
}

TEST(GeometryTest, CornerCenterRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 4000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ImageSize size{dim(rng), dim(rng)};
    double x0 = unit(rng) * size.width, x1 = unit(rng) * size.width;
    double y0 = unit(rng) * size.height, y1 = unit(rng) * size.height;
    const CornerBox box{std::min(x0, x1), std::min(y0, y1), std::max(x0, x1),
                        std::max(y0, y1)};
    const AnyBox center = ConvertBox(box, BoxFormat::kCenterNormalized, size);
    const auto back =
        std::get<CornerBox>(ConvertBox(center, BoxFormat::kCornerPair, size));
    EXPECT_NEAR(back.xmin, box.xmin, 1e-9 * size.width);
    EXPECT_NEAR(back.ymin, box.ymin, 1e-9 * size.height);
    EXPECT_NEAR(back.xmax, box.xmax, 1e-9 * size.width);
    EXPECT_NEAR(back.ymax, box.ymax, 1e-9 * size.height);
  }
}

TEST(GeometryTest, AllFormatPairsAgree) {
  const ImageSize size{800, 600};
  const BoundingBox top_left{100, 50, 200, 300};
  const CornerBox corners{100, 50, 300, 350};
  const CenterBox center{0.25, 1.0 / 3.0, 0.25, 0.5};
  for (const AnyBox& from : {AnyBox{top_left}, AnyBox{corners},
                             AnyBox{center}}) {
    const auto tl = std::get<BoundingBox>(
        ConvertBox(from, BoxFormat::kTopLeftWH, size));
    EXPECT_NEAR(tl.x, 100, 1e-9);
    EXPECT_NEAR(tl.y, 50, 1e-9);
    EXPECT_NEAR(tl.w, 200, 1e-9);
    EXPECT_NEAR(tl.h, 300, 1e-9);
    EXPECT_EQ(FormatOf(ConvertBox(from, BoxFormat::kCornerPair, size)),
              BoxFormat::kCornerPair);
  }
}

TEST(GeometryTest, ConvertRejectsBadInput) {
  const CornerBox ok{0, 0, 10, 10};
  EXPECT_THROW(ConvertBox(ok, BoxFormat::kTopLeftWH, {0, 10}), Error);
  try {
    ConvertBox(ok, BoxFormat::kTopLeftWH, {10, -1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidImageSize);
  }
  try {
    ConvertBox(CornerBox{10, 0, 5, 10}, BoxFormat::kTopLeftWH, {10, 10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidBox);
  }
  EXPECT_THROW(ConvertBox(BoundingBox{0, 0, -1, 1}, BoxFormat::kCornerPair,
                          {10, 10}),
               Error);
  EXPECT_THROW(ConvertBox(CenterBox{0.5, 0.5, 1.2, 0.1}, BoxFormat::kCornerPair,
                          {10, 10}),
               Error);
  EXPECT_THROW(ConvertBox(BoundingBox{0, 0, std::nan(""), 1},
                          BoxFormat::kCornerPair, {10, 10}),
               Error);
}

TEST(IouTest, WorkedExamples) {
  EXPECT_EQ(Iou({0, 0, 10, 10}, {0, 0, 10, 10}), 1.0);
  EXPECT_EQ(Iou({0, 0, 10, 10}, {20, 20, 10, 10}), 0.0);
  EXPECT_NEAR(Iou({0, 0, 10, 10}, {5, 0, 10, 10}), 1.0 / 3.0, 1e-12);
}

TEST(IouTest, TouchingEdgesAreDisjoint) {
  EXPECT_EQ(Iou({0, 0, 10, 10}, {10, 0, 10, 10}), 0.0);
}

TEST(IouTest, DegenerateBoxes) {
  EXPECT_EQ(Iou({5, 5, 0, 0}, {5, 5, 0, 0}), 1.0);
  EXPECT_EQ(Iou({5, 5, 0, 0}, {6, 5, 0, 0}), 0.0);
  EXPECT_EQ(Iou({5, 5, 0, 0}, {0, 0, 10, 10}), 0.0);
}

TEST(IouTest, MatchesOracleOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a = testing::RandomBox(rng);
    const BoundingBox b = testing::Jitter(rng, a);
    EXPECT_NEAR(Iou(a, b), testing::IouOracle(a, b), 1e-12);
  }
}

TEST(IouTest, Properties) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> shift(-500, 500);
  std::uniform_real_distribution<double> grow(0.0, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a = testing::RandomBox(rng);
    const BoundingBox b = i % 2 ? testing::Jitter(rng, a)
                                : testing::RandomBox(rng);
    const double iou = Iou(a, b);
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);
    EXPECT_EQ(iou, Iou(b, a));
    EXPECT_EQ(Iou(a, a), 1.0);
    const double dx = shift(rng), dy = shift(rng);
    EXPECT_NEAR(Iou(Translate(a, dx, dy), Translate(b, dx, dy)), iou, 1e-9);

    const BoundingBox outer{a.x - grow(rng), a.y - grow(rng), 0, 0};
    BoundingBox mid{outer.x, outer.y, a.right() - outer.x + grow(rng),
                    a.bottom() - outer.y + grow(rng)};
    BoundingBox big{mid.x - grow(rng), mid.y - grow(rng), 0, 0};
    big.w = mid.right() - big.x + grow(rng);
    big.h = mid.bottom() - big.y + grow(rng);
    EXPECT_LE(Iou(a, big), Iou(a, mid) + 1e-12);
  }
}

TEST(IouTest, ScaleInvariant) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a = testing::RandomBox(rng);
    const BoundingBox b = testing::Jitter(rng, a);
    EXPECT_NEAR(Iou(Scale(a, 3.5), Scale(b, 3.5)), Iou(a, b), 1e-9);
  }
}

}  // namespace
}  // namespace vflow
