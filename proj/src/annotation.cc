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

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "vflow/error.h"

namespace vflow {
namespace {

namespace pt = boost::property_tree;

std::string Stem(const std::string& filename) {
  auto slash = filename.find_last_of("/\\");
  std::string base =
      slash == std::string::npos ? filename : filename.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

std::string Trimmed(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

double RequireNumber(const pt::ptree& node, const std::string& path,
                     const std::string& context) {
  auto value = node.get_optional<std::string>(path);
  if (!value) {
    throw Error(ErrorCode::kParseError, context + ": missing <" + path + ">");
  }
  return ParseDouble(Trimmed(*value), context + " " + path);
}

// Clamps [lo, hi] into [0, limit] when the overshoot is within tolerance.
void ClampAxis(double& lo, double& hi, double limit, const char* axis,
               const std::string& context,
               std::vector<std::string>* warnings) {
  const double slack = kVocClampFraction * limit;
  if (hi < lo) {
    throw Error(ErrorCode::kInvalidAnnotation,
                context + ": inverted " + axis + " range");
  }
  if (lo < -slack || hi > limit + slack) {
    std::ostringstream msg;
    msg << context << ": " << axis << " range [" << lo << ", " << hi
        << "] exceeds image extent " << limit << " by more than 5%";
    throw Error(ErrorCode::kInvalidAnnotation, msg.str());
  }
  if (lo < 0.0 || hi > limit) {
    if (warnings != nullptr) {
      std::ostringstream msg;
      msg << context << ": clamped " << axis << " range [" << lo << ", " << hi
          << "] to [0, " << limit << "]";
      warnings->push_back(msg.str());
    }
    lo = std::clamp(lo, 0.0, limit);
    hi = std::clamp(hi, 0.0, limit);
  }
}

}  // namespace

std::string FormatShortest(double value) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

double ParseDouble(std::string_view field, std::string_view what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last ||
      !std::isfinite(value)) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": not a number '" + std::string(field) +
                    "'");
  }
  return value;
}

long long ParseInteger(std::string_view field, std::string_view what) {
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": not an integer '" + std::string(field) +
                    "'");
  }
  return value;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    pos = line.find_first_not_of(" \t\r", pos);
    if (pos == std::string_view::npos) break;
    auto end = line.find_first_of(" \t\r", pos);
    if (end == std::string_view::npos) end = line.size();
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

ImageRecord ParseVoc(std::string_view xml, const ClassMap& classes,
                     std::vector<std::string>* warnings) {
  pt::ptree tree;
  std::istringstream in{std::string(xml)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(e.line()) + ": " + e.message());
  }

  auto root = tree.get_child_optional("annotation");
  if (!root) {
    throw Error(ErrorCode::kParseError, "missing <annotation> root element");
  }

  ImageRecord record;
  record.id = Stem(Trimmed(root->get<std::string>("filename", "")));

  const double width = RequireNumber(*root, "size.width", "size");
  const double height = RequireNumber(*root, "size.height", "size");
  if (width != std::floor(width) || height != std::floor(height) ||
      width > 1e9 || height > 1e9) {
    throw Error(ErrorCode::kParseError, "size: non-integral image dimension");
  }
  record.size = {static_cast<int>(width), static_cast<int>(height)};
  ValidateImageSize(record.size);

  int object_index = 0;
  for (const auto& [tag, object] : *root) {
    if (tag != "object") continue;
    const std::string context = "object " + std::to_string(object_index++);
    const std::string name = Trimmed(object.get<std::string>("name", ""));
    if (name.empty()) {
      throw Error(ErrorCode::kParseError, context + ": missing <name>");
    }
    const ClassId class_id = classes.Lookup(name);

    double xmin = RequireNumber(object, "bndbox.xmin", context);
    double ymin = RequireNumber(object, "bndbox.ymin", context);
    double xmax = RequireNumber(object, "bndbox.xmax", context);
    double ymax = RequireNumber(object, "bndbox.ymax", context);
    ClampAxis(xmin, xmax, width, "x", context, warnings);
    ClampAxis(ymin, ymax, height, "y", context, warnings);

    record.annotations.push_back(
        {class_id, ToTopLeft(CornerBox{xmin, ymin, xmax, ymax})});
  }
  return record;
}

ImageRecord ParseYoloTxt(std::string_view text, ImageSize size,
                         const ClassMap& classes) {
  ValidateImageSize(size);
  ImageRecord record;
  record.size = size;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto fields = SplitFields(line);
    if (fields.empty()) continue;
    const std::string context = "line " + std::to_string(line_no);
    if (fields.size() != 5) {
      throw Error(ErrorCode::kParseError,
                  context + ": expected 5 fields, got " +
                      std::to_string(fields.size()));
    }
    const long long class_index = ParseInteger(fields[0], context + " class");
    std::array<double, 4> v{};
    for (int i = 0; i < 4; ++i) {
      v[i] = ParseDouble(fields[i + 1], context);
    }
    if (class_index < 0 ||
        class_index >= static_cast<long long>(classes.size())) {
      throw Error(ErrorCode::kUnknownClass,
                  context + ": class index " + std::to_string(class_index) +
                      " with " + std::to_string(classes.size()) + " classes");
    }

    auto in_range = [](double x) {
      return x >= -kYoloClampTolerance && x <= 1.0 + kYoloClampTolerance;
    };
    const double left = v[0] - v[2] / 2.0;
    const double right = v[0] + v[2] / 2.0;
    const double top = v[1] - v[3] / 2.0;
    const double bottom = v[1] + v[3] / 2.0;
    if (!std::all_of(v.begin(), v.end(), in_range) || !in_range(left) ||
        !in_range(right) || !in_range(top) || !in_range(bottom)) {
      throw Error(ErrorCode::kInvalidAnnotation,
                  context + ": normalized value outside [0, 1]");
    }
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);

    BoundingBox box = FromCenterNormalized({v[0], v[1], v[2], v[3]}, size);
    // Keep the box inside the image after rounding and clamping.
    const double x0 = std::clamp(box.x, 0.0, double(size.width));
    const double y0 = std::clamp(box.y, 0.0, double(size.height));
    const double x1 = std::clamp(box.right(), x0, double(size.width));
    const double y1 = std::clamp(box.bottom(), y0, double(size.height));
    record.annotations.push_back(
        {static_cast<ClassId>(class_index), {x0, y0, x1 - x0, y1 - y0}});
  }
  return record;
}

std::string WriteYoloTxt(const ImageRecord& record) {
  std::string out;
  for (const auto& gt : record.annotations) {
    const CenterBox c = ToCenterNormalized(gt.box, record.size);
    out += std::to_string(gt.class_id);
    for (double v : {c.cx, c.cy, c.w, c.h}) {
      out += ' ';
      out += FormatShortest(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace vflow
