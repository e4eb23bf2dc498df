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

#ifndef VFLOW_WIRE_H_
#define VFLOW_WIRE_H_

#include <string>
#include <string_view>
#include <vector>

#include "vflow/class_map.h"
#include "vflow/geometry.h"
#include "vflow/traffic_graph.h"

namespace vflow {

inline constexpr int kWireVersion = 1;

struct EventDetection {
  ClassId class_id = 0;
  double confidence = 0.0;
  CenterBox box;

  friend bool operator==(const EventDetection&, const EventDetection&) = default;
};

// One camera frame worth of detections.
struct DetectionEvent {
  int version = kWireVersion;
  std::string camera_id;
  TimestampMs timestamp_ms = 0;
  std::vector<EventDetection> detections;

  friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

// A single JSON object without the trailing newline, fields in this order:
//
//   {"v":1,"cam":"<camera id>","ts":<ms>,"det":[[class,conf,cx,cy,w,h],...]}
//
// Numbers use the shortest decimal that round-trips, so decoding the output
// reproduces every double exactly. See docs/wire_protocol.md.
std::string EncodeEvent(const DetectionEvent& event);

// Throws Error(kVersionError) for any version other than kWireVersion and
// Error(kWireError) (message starts with "byte <offset>") for anything
// malformed or out of range.
DetectionEvent DecodeEvent(std::string_view line);

}  // namespace vflow

#endif  // VFLOW_WIRE_H_
