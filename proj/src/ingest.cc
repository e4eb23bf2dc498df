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

#include "vflow/ingest.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <thread>

#include "vflow/error.h"

namespace vflow {
namespace {

constexpr std::size_t kMaxRecordedErrors = 20;

}  // namespace

std::vector<std::uint64_t> CountVehicles(const DetectionEvent& event,
                                         std::size_t num_classes,
                                         double confidence_cutoff) {
  std::vector<std::uint64_t> counts(num_classes, 0);
  for (const auto& d : event.detections) {
    if (d.class_id < num_classes && d.confidence >= confidence_cutoff) {
      ++counts[d.class_id];
    }
  }
  return counts;
}

EventSink::EventSink(TrafficGraph& graph, IngestOptions options)
    : graph_(graph), options_(options) {}

EventOutcome EventSink::Apply(const DetectionEvent& event) {
  const std::size_t k = graph_.classes().size();
  for (const auto& d : event.detections) {
    if (d.class_id >= k) {
      CountReject();
      return EventOutcome::kInvalidClass;
    }
  }
  const auto counts = CountVehicles(event, k, options_.confidence_cutoff);
  IngestOutcome outcome;
  try {
    outcome = graph_.IngestCounts(event.camera_id, event.timestamp_ms, counts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnknownNode) throw;
    CountReject();
    return EventOutcome::kUnknownCamera;
  }
  std::uint64_t vehicles = 0;
  for (auto c : counts) vehicles += c;
  vehicles_.fetch_add(vehicles, std::memory_order_relaxed);
  if (outcome == IngestOutcome::kLate) {
    late_.fetch_add(1, std::memory_order_relaxed);
    return EventOutcome::kLate;
  }
  applied_.fetch_add(1, std::memory_order_relaxed);
  return EventOutcome::kApplied;
}

IngestStats EventSink::stats() const {
  return {applied_.load(), late_.load(), rejected_.load(), vehicles_.load()};
}

ReplaySummary ReplayStream(std::istream& in, TrafficGraph& graph, double speed,
                           IngestOptions options) {
  if (!(speed >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "replay speed must be >= 0");
  }
  const auto started = std::chrono::steady_clock::now();
  ReplaySummary summary;
  auto record_error = [&summary](std::uint64_t line_no, const std::string& what) {
    if (summary.errors.size() < kMaxRecordedErrors) {
      summary.errors.push_back("line " + std::to_string(line_no) + ": " + what);
    }
  };

  std::vector<std::pair<std::uint64_t, DetectionEvent>> events;
  std::string line;
  while (std::getline(in, line)) {
    ++summary.lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      events.emplace_back(summary.lines, DecodeEvent(line));
    } catch (const Error& e) {
      ++summary.malformed;
      ++summary.rejects;
      record_error(summary.lines, e.what());
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) {
                     return a.second.timestamp_ms < b.second.timestamp_ms;
                   });

  EventSink sink(graph, options);
  const auto replay_start = std::chrono::steady_clock::now();
  for (const auto& [line_no, event] : events) {
    if (speed > 0.0) {
      const double offset_ms =
          static_cast<double>(event.timestamp_ms -
                              events.front().second.timestamp_ms) /
          speed;
      std::this_thread::sleep_until(
          replay_start + std::chrono::duration_cast<std::chrono::nanoseconds>(
                             std::chrono::duration<double, std::milli>(
                                 offset_ms)));
    }
    switch (sink.Apply(event)) {
      case EventOutcome::kUnknownCamera:
        record_error(line_no, "unknown camera '" + event.camera_id + "'");
        break;
      case EventOutcome::kInvalidClass:
        record_error(line_no, "class index outside class map");
        break;
      default:
        break;
    }
  }
  const IngestStats stats = sink.stats();
  summary.events = stats.accepted();
  summary.late = stats.late;
  summary.rejects += stats.rejected;
  summary.vehicles = stats.vehicles;
  summary.duration = std::chrono::steady_clock::now() - started;
  return summary;
}

ReplaySummary ReplayFile(const std::filesystem::path& path,
                         TrafficGraph& graph, double speed,
                         IngestOptions options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIOError, "cannot open " + path.string());
  }
  return ReplayStream(in, graph, speed, options);
}

}  // namespace vflow
