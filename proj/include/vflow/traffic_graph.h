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

#ifndef VFLOW_TRAFFIC_GRAPH_H_
#define VFLOW_TRAFFIC_GRAPH_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vflow/class_map.h"

namespace vflow {

using TimestampMs = std::int64_t;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// One camera location.
struct CameraNode {
  std::string id;
  std::string label;
  std::optional<GeoPoint> coords;

  friend bool operator==(const CameraNode&, const CameraNode&) = default;
};

// Directed road link; length is static metadata in meters.
struct RoadEdge {
  std::string source;
  std::string target;
  double length_m = 0.0;

  friend bool operator==(const RoadEdge&, const RoadEdge&) = default;
};

// Half-open interval [begin_ms, end_ms).
struct TimeRange {
  TimestampMs begin_ms = 0;
  TimestampMs end_ms = 0;
};

struct FlowWindow {
  std::string node_id;
  TimestampMs start_ms = 0;
  TimestampMs width_ms = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  friend bool operator==(const FlowWindow&, const FlowWindow&) = default;
};

struct NodeFlow {
  std::string node_id;
  std::uint64_t total = 0;

  friend bool operator==(const NodeFlow&, const NodeFlow&) = default;
};

struct GraphConfig {
  TimestampMs window_ms = 60'000;
  // Events older than the node's newest timestamp minus this horizon go to
  // the dead-letter tally instead of their window. nullopt keeps everything.
  std::optional<TimestampMs> lateness_ms = 300'000;

  friend bool operator==(const GraphConfig&, const GraphConfig&) = default;
};

enum class IngestOutcome { kApplied, kLate };

// Window store of one node, as captured by a snapshot.
struct NodeFlowState {
  std::map<TimestampMs, std::vector<std::uint64_t>> windows;
  std::vector<std::uint64_t> dead_letter;
  std::optional<TimestampMs> watermark;

  friend bool operator==(const NodeFlowState&, const NodeFlowState&) = default;
};

// Camera nodes joined by directed road edges, each node holding tumbling
// per-class count windows.
//
// Thread safety: ingestion and queries may run concurrently from any number
// of threads. Writes to one node are serialized by that node's lock, and a
// query of a node sees a point-in-time view of it. Topology changes
// (AddNode/AddRoad) take an exclusive lock over the whole graph.
class TrafficGraph {
 public:
  explicit TrafficGraph(ClassMap classes, GraphConfig config = {});
  ~TrafficGraph();

  TrafficGraph(TrafficGraph&& other) noexcept;
  TrafficGraph& operator=(TrafficGraph&& other) noexcept;
  TrafficGraph(const TrafficGraph&) = delete;
  TrafficGraph& operator=(const TrafficGraph&) = delete;

  const ClassMap& classes() const { return classes_; }
  const GraphConfig& config() const { return config_; }

  // Throws Error(kDuplicateNode) or Error(kInvalidInput) for an empty id.
  void AddNode(CameraNode node);

  // Two-way roads add both directions with the same length. Re-adding an
  // existing direction replaces its length. Throws kUnknownNode, kSelfLoop
  // or kInvalidLength.
  void AddRoad(std::string_view from, std::string_view to, double length_m,
               bool one_way);

  // Adds `counts` (one entry per class) into the window holding
  // `timestamp_ms`. Throws kUnknownNode or kClassMapMismatch.
  IngestOutcome IngestCounts(std::string_view node_id,
                             TimestampMs timestamp_ms,
                             std::span<const std::uint64_t> counts);

  // Every window overlapping `range`, zero-filled, oldest first. A non-empty
  // `class_filter` zeroes the counts of all other classes. Throws
  // kUnknownNode, or kInvalidInput for an inverted or oversized range.
  std::vector<FlowWindow> QueryFlow(
      std::string_view node_id, TimeRange range,
      std::span<const ClassId> class_filter = {}) const;

  // Nodes by total count within `range`, descending; ties by id ascending.
  std::vector<NodeFlow> TopNodesByFlow(
      TimeRange range, std::span<const ClassId> class_filter = {},
      std::size_t limit = 10) const;

  bool HasNode(std::string_view id) const;
  std::size_t node_count() const;
  std::size_t edge_count() const;
  // Sorted by id.
  std::vector<CameraNode> Nodes() const;
  // Sorted by (source, target).
  std::vector<RoadEdge> Edges() const;
  std::optional<double> EdgeLength(std::string_view from,
                                   std::string_view to) const;

  // Per-class sums over all stored windows of a node.
  std::vector<std::uint64_t> TotalCounts(std::string_view node_id) const;
  std::vector<std::uint64_t> DeadLetterCounts(std::string_view node_id) const;

  NodeFlowState ExportNodeState(std::string_view node_id) const;
  // Replaces a node's window store. Throws kUnknownNode or
  // kClassMapMismatch when vector lengths disagree with the class map.
  void ImportNodeState(std::string_view node_id, NodeFlowState state);

  TimestampMs WindowStart(TimestampMs timestamp_ms) const;

 private:
  struct NodeEntry;

  NodeEntry& FindNode(std::string_view id) const;
  void CheckFilter(std::span<const ClassId> class_filter) const;

  ClassMap classes_;
  GraphConfig config_;
  std::unique_ptr<std::shared_mutex> topology_mutex_;
  std::map<std::string, std::unique_ptr<NodeEntry>, std::less<>> nodes_;
  std::map<std::pair<std::string, std::string>, double> edges_;
};

}  // namespace vflow

#endif  // VFLOW_TRAFFIC_GRAPH_H_
