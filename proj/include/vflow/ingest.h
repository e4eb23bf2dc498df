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

#ifndef VFLOW_INGEST_H_
#define VFLOW_INGEST_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vflow/traffic_graph.h"
#include "vflow/wire.h"

namespace vflow {

struct IngestOptions {
  // Detections below this confidence are not counted as vehicles.
  double confidence_cutoff = 0.25;
};

enum class EventOutcome { kApplied, kLate, kUnknownCamera, kInvalidClass };

struct IngestStats {
  std::uint64_t applied = 0;
  std::uint64_t late = 0;
  std::uint64_t rejected = 0;
  std::uint64_t vehicles = 0;

  std::uint64_t accepted() const { return applied + late; }
};

// Per-class vehicle counts of one event: one vehicle per detection at or
// above `confidence_cutoff`. Classes >= num_classes are ignored.
std::vector<std::uint64_t> CountVehicles(const DetectionEvent& event,
                                         std::size_t num_classes,
                                         double confidence_cutoff);

// Turns decoded events into graph ingests. Safe to share between threads;
// the tallies are atomic.
class EventSink {
 public:
  explicit EventSink(TrafficGraph& graph, IngestOptions options = {});

  // Unknown cameras and out-of-map class indices are tallied as rejects and
  // leave the graph untouched.
  EventOutcome Apply(const DetectionEvent& event);
  void CountReject() { rejected_.fetch_add(1, std::memory_order_relaxed); }

  IngestStats stats() const;
  TrafficGraph& graph() { return graph_; }

 private:
  TrafficGraph& graph_;
  IngestOptions options_;
  std::atomic<std::uint64_t> applied_{0};
  std::atomic<std::uint64_t> late_{0};
  std::atomic<std::uint64_t> rejected_{0};
  std::atomic<std::uint64_t> vehicles_{0};
};

struct ReplaySummary {
  std::uint64_t lines = 0;
  // Events taken by the graph, including dead-lettered late ones.
  std::uint64_t events = 0;
  std::uint64_t late = 0;
  // Malformed lines plus events for unknown cameras or classes.
  std::uint64_t rejects = 0;
  std::uint64_t malformed = 0;
  std::uint64_t vehicles = 0;
  std::chrono::duration<double> duration{0};
  // First few problems, "line N: message".
  std::vector<std::string> errors;
};

// Applies every event in timestamp order (stable for equal timestamps).
// speed == 0 replays as fast as possible; otherwise event gaps are slept
// through, scaled down by `speed`. Malformed lines are recorded and skipped.
ReplaySummary ReplayStream(std::istream& in, TrafficGraph& graph, double speed,
                           IngestOptions options = {});

// Throws Error(kIOError) when the file cannot be opened.
ReplaySummary ReplayFile(const std::filesystem::path& path,
                         TrafficGraph& graph, double speed,
                         IngestOptions options = {});

}  // namespace vflow

#endif  // VFLOW_INGEST_H_
