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

#include "vflow/wire.h"

#include "json.hpp"
#include "vflow/annotation.h"
#include "vflow/error.h"

namespace vflow {
namespace {

using nlohmann::json;

[[noreturn]] void WireFail(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::kWireError,
              "byte " + std::to_string(offset) + ": " + what);
}

double UnitValue(const json& value, const char* what) {
  if (!value.is_number()) WireFail(0, std::string(what) + " is not a number");
  const double v = value.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    WireFail(0, std::string(what) + " outside [0, 1]");
  }
  return v;
}

}  // namespace

std::string EncodeEvent(const DetectionEvent& event) {
  std::string out;
  out.reserve(48 + event.detections.size() * 64);
  out += "{\"v\":";
  out += std::to_string(event.version);
  out += ",\"cam\":";
  out += json(event.camera_id).dump();
  out += ",\"ts\":";
  out += std::to_string(event.timestamp_ms);
  out += ",\"det\":[";
  for (std::size_t i = 0; i < event.detections.size(); ++i) {
    const auto& d = event.detections[i];
    if (i > 0) out += ',';
    out += '[';
    out += std::to_string(d.class_id);
    for (double v : {d.confidence, d.box.cx, d.box.cy, d.box.w, d.box.h}) {
      out += ',';
      out += FormatShortest(v);
    }
    out += ']';
  }
  out += "]}";
  return out;
}

DetectionEvent DecodeEvent(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    WireFail(e.byte, e.what());
  }
  if (!doc.is_object()) WireFail(0, "record is not an object");

  auto version = doc.find("v");
  if (version == doc.end() || !version->is_number_integer()) {
    WireFail(0, "missing integer field 'v'");
  }
  if (version->get<long long>() != kWireVersion) {
    throw Error(ErrorCode::kVersionError,
                "wire version " + version->dump() + ", expected " +
                    std::to_string(kWireVersion));
  }
  if (doc.size() != 4) WireFail(0, "expected exactly fields v, cam, ts, det");

  DetectionEvent event;
  auto cam = doc.find("cam");
  auto ts = doc.find("ts");
  auto det = doc.find("det");
  if (cam == doc.end() || !cam->is_string() || cam->get<std::string>().empty()) {
    WireFail(0, "missing camera id 'cam'");
  }
  if (ts == doc.end() || !ts->is_number_integer()) {
    WireFail(0, "missing integer timestamp 'ts'");
  }
  if (det == doc.end() || !det->is_array()) {
    WireFail(0, "missing detection list 'det'");
  }
  event.camera_id = cam->get<std::string>();
  event.timestamp_ms = ts->get<TimestampMs>();
  if (event.timestamp_ms <= 0) WireFail(0, "timestamp must be positive");

  event.detections.reserve(det->size());
  for (const auto& entry : *det) {
    if (!entry.is_array() || entry.size() != 6) {
      WireFail(0, "detection must be [class,conf,cx,cy,w,h]");
    }
    if (!entry[0].is_number_unsigned()) {
      WireFail(0, "detection class must be a non-negative integer");
    }
    EventDetection d;
    const auto cls = entry[0].get<std::uint64_t>();
    if (cls > 0xFFFFFFFFull) WireFail(0, "detection class out of range");
    d.class_id = static_cast<ClassId>(cls);
    d.confidence = UnitValue(entry[1], "confidence");
    d.box = {UnitValue(entry[2], "cx"), UnitValue(entry[3], "cy"),
             UnitValue(entry[4], "w"), UnitValue(entry[5], "h")};
    event.detections.push_back(d);
  }
  return event;
}

}  // namespace vflow
