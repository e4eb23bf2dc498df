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


#include "vflow/annotation.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.h"
#include "vflow/class_map.h"
#include "vflow/error.h"

namespace vflow {
namespace {

using testing::MakeVocXml;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no vflow::Error thrown";
  return ErrorCode::kIOError;
}

TEST(ClassMapTest, DefaultOrder) {
  const ClassMap classes = ClassMap::Default();
  ASSERT_EQ(classes.size(), 15u);
  EXPECT_EQ(classes.name(0), "bicycle");
  EXPECT_EQ(classes.Lookup("bus"), 3u);
  EXPECT_EQ(classes.Lookup("car"), 4u);
  EXPECT_EQ(classes.Lookup("wheelbarrow"), 14u);
  EXPECT_FALSE(classes.Find("lorry").has_value());
}

TEST(ClassMapTest, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(ClassMap({"a", "a"}), Error);
  EXPECT_THROW(ClassMap(std::vector<std::string>{}), Error);
  EXPECT_THROW(ClassMap({"a", ""}), Error);
}

TEST(ClassMapTest, ListRoundTrip) {
  std::stringstream io;
  WriteClassList(ClassMap::Default(), io);
  EXPECT_EQ(ReadClassList(io), ClassMap::Default());
}

TEST(ClassMapTest, UnknownLookupNamesTheClass) {
  try {
    ClassMap::Default().Lookup("lorry");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownClass);
    EXPECT_NE(std::string(e.what()).find("lorry"), std::string::npos);
  }
}

TEST(VocTest, SingleBusObject) {
  const ImageRecord record = ParseVoc(
      MakeVocXml("street_01.jpg", {640, 480}, {{"bus", 10, 20, 110, 220}}),
      ClassMap::Default());
  EXPECT_EQ(record.id, "street_01");
  EXPECT_EQ(record.size, (ImageSize{640, 480}));
  ASSERT_EQ(record.annotations.size(), 1u);
  EXPECT_EQ(record.annotations[0].class_id, 3u);
  EXPECT_EQ(record.annotations[0].box, (BoundingBox{10, 20, 100, 200}));
}

TEST(VocTest, NoObjectsIsNullClassImage) {
  const ImageRecord record =
      ParseVoc(MakeVocXml("empty.jpg", {640, 640}, {}), ClassMap::Default());
  EXPECT_TRUE(record.annotations.empty());
}

TEST(VocTest, UnknownClassNamesIt) {
  try {
    ParseVoc(MakeVocXml("a.jpg", {640, 640}, {{"lorry", 0, 0, 10, 10}}),
             ClassMap::Default());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownClass);
    EXPECT_NE(std::string(e.what()).find("lorry"), std::string::npos);
  }
}

TEST(VocTest, MalformedDocumentReportsLine) {
  try {
    ParseVoc("<annotation>\n<size>\n<width>10</width>\n</annotation>",
             ClassMap::Default());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
  EXPECT_EQ(CodeOf([] { ParseVoc("<other/>", ClassMap::Default()); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseVoc("<annotation><size><width>10</width></size></annotation>",
                       ClassMap::Default());
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseVoc(MakeVocXml("a.jpg", {0, 10}, {}), ClassMap::Default());
            }),
            ErrorCode::kInvalidImageSize);
}

TEST(VocTest, SmallOvershootIsClampedWithWarning) {
  std::vector<std::string> warnings;
  const ImageRecord record = ParseVoc(
      MakeVocXml("a.jpg", {100, 100}, {{"car", -3, 0, 104, 50}}),
      ClassMap::Default(), &warnings);
  EXPECT_EQ(record.annotations[0].box, (BoundingBox{0, 0, 100, 50}));
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(VocTest, LargeOvershootIsInvalid) {
  EXPECT_EQ(CodeOf([] {
              ParseVoc(MakeVocXml("a.jpg", {100, 100}, {{"car", 0, 0, 106, 50}}),
                       ClassMap::Default());
            }),
            ErrorCode::kInvalidAnnotation);
  EXPECT_EQ(CodeOf([] {
              ParseVoc(MakeVocXml("a.jpg", {100, 100}, {{"car", 50, 0, 40, 50}}),
                       ClassMap::Default());
            }),
            ErrorCode::kInvalidAnnotation);
}

TEST(YoloTest, ParseCarLine) {
  const ImageRecord record =
      ParseYoloTxt("4 0.25 0.25 0.5 0.5\n", {640, 640}, ClassMap::Default());
  ASSERT_EQ(record.annotations.size(), 1u);
  EXPECT_EQ(record.annotations[0].class_id, 4u);
  EXPECT_EQ(record.annotations[0].box, (BoundingBox{0, 0, 320, 320}));
}

TEST(YoloTest, EmptyFile) {
  EXPECT_TRUE(
      ParseYoloTxt("", {640, 640}, ClassMap::Default()).annotations.empty());
  EXPECT_TRUE(ParseYoloTxt("\n  \n", {640, 640}, ClassMap::Default())
                  .annotations.empty());
}

TEST(YoloTest, Errors) {
  const ClassMap classes = ClassMap::Default();
  EXPECT_EQ(CodeOf([&] { ParseYoloTxt("99 0.5 0.5 0.1 0.1", {64, 64}, classes); }),
            ErrorCode::kUnknownClass);
  EXPECT_EQ(CodeOf([&] { ParseYoloTxt("-1 0.5 0.5 0.1 0.1", {64, 64}, classes); }),
            ErrorCode::kUnknownClass);
  EXPECT_EQ(CodeOf([&] { ParseYoloTxt("1 0.5 abc 0.1 0.1", {64, 64}, classes); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseYoloTxt("1 0.5 0.5 0.1", {64, 64}, classes); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseYoloTxt("1 0.5 0.5 1.1 0.1", {64, 64}, classes); }),
            ErrorCode::kInvalidAnnotation);
  EXPECT_EQ(CodeOf([&] { ParseYoloTxt("1 0.9 0.5 0.4 0.1", {64, 64}, classes); }),
            ErrorCode::kInvalidAnnotation);
}

TEST(YoloTest, ToleranceIsClamped) {
  const ImageRecord record = ParseYoloTxt("0 0.5 0.5 1.0000005 1",
                                          {100, 100}, ClassMap::Default());
  const BoundingBox& box = record.annotations[0].box;
  EXPECT_GE(box.x, 0.0);
  EXPECT_LE(box.right(), 100.0);
}

TEST(YoloTest, WriteWorkedExample) {
  ImageRecord record;
  record.size = {640, 640};
  record.annotations.push_back({4, {0, 0, 320, 320}});
  EXPECT_EQ(WriteYoloTxt(record), "4 0.25 0.25 0.5 0.5\n");
  record.annotations.clear();
  EXPECT_EQ(WriteYoloTxt(record), "");
}

TEST(YoloTest, VocToYoloRoundTripPreservesNormalizedBoxes) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(16, 4096);
  std::uniform_int_distribution<int> count(0, 8);
  std::uniform_int_distribution<ClassId> cls(0, 14);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ClassMap classes = ClassMap::Default();
  for (int i = 0; i < 300; ++i) {
    const ImageSize size{dim(rng), dim(rng)};
    std::vector<testing::VocObject> objects;
    for (int j = count(rng); j > 0; --j) {
      double x0 = unit(rng) * size.width, x1 = unit(rng) * size.width;
      double y0 = unit(rng) * size.height, y1 = unit(rng) * size.height;
      objects.push_back({classes.name(cls(rng)), std::min(x0, x1),
                         std::min(y0, y1), std::max(x0, x1),
                         std::max(y0, y1)});
    }
    const ImageRecord parsed =
        ParseVoc(MakeVocXml("x.jpg", size, objects), classes);
    const ImageRecord back = ParseYoloTxt(WriteYoloTxt(parsed), size, classes);
    ASSERT_EQ(back.annotations.size(), objects.size());
    for (std::size_t j = 0; j < objects.size(); ++j) {
      EXPECT_EQ(back.annotations[j].class_id, parsed.annotations[j].class_id);
      const CenterBox a = ToCenterNormalized(parsed.annotations[j].box, size);
      const CenterBox b = ToCenterNormalized(back.annotations[j].box, size);
      EXPECT_NEAR(a.cx, b.cx, 1e-9);
      EXPECT_NEAR(a.cy, b.cy, 1e-9);
      EXPECT_NEAR(a.w, b.w, 1e-9);
      EXPECT_NEAR(a.h, b.h, 1e-9);
    }
  }
}

TEST(FieldsTest, StrictNumbers) {
  EXPECT_EQ(ParseDouble("0.25", "x"), 0.25);
  EXPECT_EQ(ParseDouble("+1", "x"), 1.0);
  EXPECT_THROW(ParseDouble("1.0x", "x"), Error);
  EXPECT_THROW(ParseDouble("", "x"), Error);
  EXPECT_THROW(ParseDouble("nan", "x"), Error);
  EXPECT_EQ(ParseInteger("42", "n"), 42);
  EXPECT_THROW(ParseInteger("4.2", "n"), Error);
  EXPECT_EQ(SplitFields("  a\tb  c \r").size(), 3u);
  EXPECT_EQ(FormatShortest(0.1), "0.1");
}

}  // namespace
}  // namespace vflow
