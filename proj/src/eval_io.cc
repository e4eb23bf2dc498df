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

#include "vflow/eval_io.h"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "vflow/error.h"

namespace vflow {
namespace {

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string Number(double v, bool full_precision) {
  return full_precision ? FormatShortest(v) : Fixed3(v);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto b = part.find_first_not_of(" \t\r");
    auto e = part.find_last_not_of(" \t\r");
    parts.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
  }
  return parts;
}

}  // namespace

std::vector<Detection> ReadDetections(std::istream& in,
                                      const DatasetManifest& manifest,
                                      const ClassMap& classes) {
  std::map<std::string, ImageSize, std::less<>> sizes;
  for (const auto& r : manifest.records) sizes.emplace(r.id, r.size);

  std::vector<Detection> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitFields(line);
    if (fields.empty()) continue;
    const std::string context = "detections line " + std::to_string(line_no);
    if (fields.size() != 7) {
      throw Error(ErrorCode::kParseError, context + ": expected 7 fields");
    }
    auto size = sizes.find(fields[0]);
    if (size == sizes.end()) {
      throw Error(ErrorCode::kInvalidInput,
                  context + ": unknown image '" + std::string(fields[0]) + "'");
    }
    const long long cls = ParseInteger(fields[1], context);
    if (cls < 0 || cls >= static_cast<long long>(classes.size())) {
      throw Error(ErrorCode::kUnknownClass,
                  context + ": class index " + std::to_string(cls));
    }
    Detection det;
    det.image_id = std::string(fields[0]);
    det.class_id = static_cast<ClassId>(cls);
    det.confidence = ParseDouble(fields[2], context);
    if (det.confidence < 0.0 || det.confidence > 1.0) {
      throw Error(ErrorCode::kInvalidInput,
                  context + ": confidence outside [0, 1]");
    }
    CenterBox c{ParseDouble(fields[3], context), ParseDouble(fields[4], context),
                ParseDouble(fields[5], context),
                ParseDouble(fields[6], context)};
    try {
      ValidateBox(c);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidInput, context + ": " + e.what());
    }
    det.box = FromCenterNormalized(c, size->second);
    out.push_back(std::move(det));
  }
  return out;
}

void WriteDetections(std::span<const Detection> detections,
                     const DatasetManifest& manifest, std::ostream& out) {
  std::map<std::string, ImageSize> sizes;
  for (const auto& r : manifest.records) sizes.emplace(r.id, r.size);
  for (const auto& d : detections) {
    const CenterBox c = ToCenterNormalized(d.box, sizes.at(d.image_id));
    out << d.image_id << ' ' << d.class_id << ' '
        << FormatShortest(d.confidence) << ' ' << FormatShortest(c.cx) << ' '
        << FormatShortest(c.cy) << ' ' << FormatShortest(c.w) << ' '
        << FormatShortest(c.h) << '\n';
  }
}

void WriteMetricsCsv(std::span<const MetricsRow> rows, std::ostream& out,
                     bool full_precision) {
  out << "Class,Instances,P,R,mAP50,mAP50-95\n";
  for (const auto& r : rows) {
    out << r.name << ',' << r.instances << ','
        << Number(r.precision, full_precision) << ','
        << Number(r.recall, full_precision) << ','
        << Number(r.map50, full_precision) << ','
        << Number(r.map50_95, full_precision) << '\n';
  }
}

std::vector<MetricsRow> ReadMetricsCsv(std::istream& in) {
  std::vector<MetricsRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto parts = SplitCsv(line);
    if (parts.empty() || (parts.size() == 1 && parts[0].empty())) continue;
    if (line_no == 1 && parts[0] == "Class") continue;
    const std::string context = "metrics line " + std::to_string(line_no);
    if (parts.size() != 6) {
      throw Error(ErrorCode::kParseError, context + ": expected 6 columns");
    }
    if (parts[0] == "all") continue;
    MetricsRow row;
    row.name = parts[0];
    const long long instances = ParseInteger(parts[1], context);
    if (instances < 0) {
      throw Error(ErrorCode::kParseError, context + ": negative instances");
    }
    row.instances = static_cast<std::size_t>(instances);
    row.precision = ParseDouble(parts[2], context);
    row.recall = ParseDouble(parts[3], context);
    row.map50 = ParseDouble(parts[4], context);
    row.map50_95 = ParseDouble(parts[5], context);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string FormatMetricsTable(std::span<const MetricsRow> rows) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-14s %10s %7s %7s %7s %9s\n", "Class",
                "Instances", "P", "R", "mAP50", "mAP50-95");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-14s %10zu %7.3f %7.3f %7.3f %9.3f\n",
                  r.name.c_str(), r.instances, r.precision, r.recall, r.map50,
                  r.map50_95);
    out << buf;
  }
  return out.str();
}

void WriteConfusionCsv(const ConfusionMatrix& matrix, const ClassMap& classes,
                       std::ostream& out, bool normalized) {
  const std::size_t n = matrix.dimension();
  auto label = [&](std::size_t i) {
    return i == matrix.background() ? std::string("background")
                                    : classes.name(static_cast<ClassId>(i));
  };
  const auto norm = matrix.RowNormalized();
  out << "true\\predicted";
  for (std::size_t c = 0; c < n; ++c) out << ',' << label(c);
  out << '\n';
  for (std::size_t r = 0; r < n; ++r) {
    out << label(r);
    for (std::size_t c = 0; c < n; ++c) {
      out << ',';
      if (normalized) {
        out << FormatShortest(norm[r * n + c]);
      } else {
        out << matrix.at(r, c);
      }
    }
    out << '\n';
  }
}

void WritePrCurvesCsv(const EvalReport& report, const ClassMap& classes,
                      std::ostream& out) {
  out << "class,kind,index,recall,precision\n";
  for (const auto& c : report.classes) {
    const std::string& name = classes.name(c.class_id);
    for (std::size_t i = 0; i < c.pr_curve.raw.size(); ++i) {
      out << name << ",raw," << i << ','
          << FormatShortest(c.pr_curve.raw[i].recall) << ','
          << FormatShortest(c.pr_curve.raw[i].precision) << '\n';
    }
    for (std::size_t i = 0; i < c.pr_curve.envelope.size(); ++i) {
      out << name << ",envelope," << i << ','
          << FormatShortest(static_cast<double>(i) / 100.0) << ','
          << FormatShortest(c.pr_curve.envelope[i]) << '\n';
    }
  }
}

std::string SummaryJson(const EvalReport& report, const ClassMap& classes) {
  using nlohmann::json;
  auto row_json = [](const MetricsRow& r) {
    return json{{"class", r.name},       {"instances", r.instances},
                {"precision", r.precision}, {"recall", r.recall},
                {"map50", r.map50},      {"map50_95", r.map50_95}};
  };
  json doc;
  doc["images"] = report.images;
  doc["detections"] = report.detections;
  doc["iou_threshold"] = report.config.iou_threshold;
  doc["confusion_iou_threshold"] = report.config.confusion_iou_threshold;
  doc["confusion_confidence_threshold"] =
      report.config.confusion_confidence_threshold;
  doc["operating_point"] =
      report.config.fixed_confidence ? "fixed" : "best_f1";
  doc["all"] = row_json(report.all);
  json rows = json::array();
  for (const auto& c : report.classes) {
    json r = row_json(c.row);
    r["confidence"] = c.operating_point.confidence;
    r["ap_by_threshold"] = c.ap_by_threshold;
    rows.push_back(std::move(r));
  }
  doc["classes"] = std::move(rows);
  doc["class_names"] = classes.names();
  return doc.dump(2);
}

}  // namespace vflow
