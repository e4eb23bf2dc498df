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

#include "vflow/traffic_graph.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "vflow/error.h"

namespace vflow {

struct TrafficGraph::NodeEntry {
  CameraNode node;
  mutable std::mutex mutex;
  NodeFlowState state;
};

namespace {

constexpr TimestampMs kMaxQueryWindows = 1'000'000;

std::uint64_t SumFiltered(const std::vector<std::uint64_t>& counts,
                          std::span<const ClassId> filter) {
  if (filter.empty()) {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  }
  std::uint64_t total = 0;
  for (ClassId c : filter) total += counts[c];
  return total;
}

}  // namespace

std::uint64_t FlowWindow::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

TrafficGraph::TrafficGraph(ClassMap classes, GraphConfig config)
    : classes_(std::move(classes)),
      config_(config),
      topology_mutex_(std::make_unique<std::shared_mutex>()) {
  if (config_.window_ms <= 0) {
    throw Error(ErrorCode::kInvalidInput, "window width must be positive");
  }
  if (config_.lateness_ms && *config_.lateness_ms < 0) {
    throw Error(ErrorCode::kInvalidInput, "lateness horizon must be >= 0");
  }
}

TrafficGraph::~TrafficGraph() = default;
TrafficGraph::TrafficGraph(TrafficGraph&&) noexcept = default;
TrafficGraph& TrafficGraph::operator=(TrafficGraph&&) noexcept = default;

TimestampMs TrafficGraph::WindowStart(TimestampMs timestamp_ms) const {
  TimestampMs q = timestamp_ms / config_.window_ms;
  if (timestamp_ms % config_.window_ms != 0 && timestamp_ms < 0) --q;
  return q * config_.window_ms;
}

TrafficGraph::NodeEntry& TrafficGraph::FindNode(std::string_view id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error(ErrorCode::kUnknownNode, std::string(id));
  }
  return *it->second;
}

void TrafficGraph::CheckFilter(std::span<const ClassId> class_filter) const {
  for (ClassId c : class_filter) {
    if (!classes_.contains(c)) {
      throw Error(ErrorCode::kClassMapMismatch,
                  "class filter index " + std::to_string(c));
    }
  }
}

void TrafficGraph::AddNode(CameraNode node) {
  if (node.id.empty()) {
    throw Error(ErrorCode::kInvalidInput, "node id must not be empty");
  }
  std::unique_lock lock(*topology_mutex_);
  if (nodes_.contains(node.id)) {
    throw Error(ErrorCode::kDuplicateNode, node.id);
  }
  auto entry = std::make_unique<NodeEntry>();
  entry->state.dead_letter.assign(classes_.size(), 0);
  std::string id = node.id;
  entry->node = std::move(node);
  nodes_.emplace(std::move(id), std::move(entry));
}

void TrafficGraph::AddRoad(std::string_view from, std::string_view to,
                           double length_m, bool one_way) {
  std::unique_lock lock(*topology_mutex_);
  FindNode(from);
  FindNode(to);
  if (from == to) {
    throw Error(ErrorCode::kSelfLoop, std::string(from));
  }
  if (!(length_m > 0.0) || !std::isfinite(length_m)) {
    throw Error(ErrorCode::kInvalidLength,
                std::string(from) + "->" + std::string(to) + " length " +
                    std::to_string(length_m));
  }
  edges_[{std::string(from), std::string(to)}] = length_m;
  if (!one_way) edges_[{std::string(to), std::string(from)}] = length_m;
}

IngestOutcome TrafficGraph::IngestCounts(std::string_view node_id,
                                         TimestampMs timestamp_ms,
                                         std::span<const std::uint64_t> counts) {
  if (counts.size() != classes_.size()) {
    throw Error(ErrorCode::kClassMapMismatch,
                "got " + std::to_string(counts.size()) + " counts for " +
                    std::to_string(classes_.size()) + " classes");
  }
  std::shared_lock topology(*topology_mutex_);
  NodeEntry& entry = FindNode(node_id);
  std::lock_guard lock(entry.mutex);
  NodeFlowState& state = entry.state;

  if (config_.lateness_ms && state.watermark &&
      timestamp_ms < *state.watermark - *config_.lateness_ms) {
    for (std::size_t c = 0; c < counts.size(); ++c) {
      state.dead_letter[c] += counts[c];
    }
    return IngestOutcome::kLate;
  }

  auto [it, inserted] = state.windows.try_emplace(WindowStart(timestamp_ms));
  if (inserted) it->second.assign(classes_.size(), 0);
  for (std::size_t c = 0; c < counts.size(); ++c) it->second[c] += counts[c];
  state.watermark =
      state.watermark ? std::max(*state.watermark, timestamp_ms) : timestamp_ms;
  return IngestOutcome::kApplied;
}

std::vector<FlowWindow> TrafficGraph::QueryFlow(
    std::string_view node_id, TimeRange range,
    std::span<const ClassId> class_filter) const {
  if (range.begin_ms > range.end_ms) {
    throw Error(ErrorCode::kInvalidInput, "query range start after end");
  }
  CheckFilter(class_filter);
  std::shared_lock topology(*topology_mutex_);
  const NodeEntry& entry = FindNode(node_id);
  if (range.begin_ms == range.end_ms) return {};

  const TimestampMs first = WindowStart(range.begin_ms);
  const TimestampMs last = WindowStart(range.end_ms - 1);
  if ((last - first) / config_.window_ms >= kMaxQueryWindows) {
    throw Error(ErrorCode::kInvalidInput, "query range spans too many windows");
  }

  std::vector<bool> keep(classes_.size(), class_filter.empty());
  for (ClassId c : class_filter) keep[c] = true;

  std::vector<FlowWindow> out;
  out.reserve(static_cast<std::size_t>((last - first) / config_.window_ms + 1));
  std::lock_guard lock(entry.mutex);
  auto stored = entry.state.windows.lower_bound(first);
  for (TimestampMs start = first; start <= last; start += config_.window_ms) {
    FlowWindow window{std::string(node_id), start, config_.window_ms,
                      std::vector<std::uint64_t>(classes_.size(), 0)};
    if (stored != entry.state.windows.end() && stored->first == start) {
      for (std::size_t c = 0; c < classes_.size(); ++c) {
        if (keep[c]) window.counts[c] = stored->second[c];
      }
      ++stored;
    }
    out.push_back(std::move(window));
  }
  return out;
}

std::vector<NodeFlow> TrafficGraph::TopNodesByFlow(
    TimeRange range, std::span<const ClassId> class_filter,
    std::size_t limit) const {
  if (limit == 0) {
    throw Error(ErrorCode::kInvalidInput, "limit must be at least 1");
  }
  CheckFilter(class_filter);
  std::shared_lock topology(*topology_mutex_);
  std::vector<NodeFlow> ranked;
  ranked.reserve(nodes_.size());
  const bool empty_range = range.begin_ms >= range.end_ms;
  const TimestampMs first = WindowStart(range.begin_ms);
  for (const auto& [id, entry] : nodes_) {
    NodeFlow flow{id, 0};
    if (!empty_range) {
      std::lock_guard lock(entry->mutex);
      for (auto it = entry->state.windows.lower_bound(first);
           it != entry->state.windows.end() && it->first < range.end_ms;
           ++it) {
        flow.total += SumFiltered(it->second, class_filter);
      }
    }
    ranked.push_back(std::move(flow));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const NodeFlow& a, const NodeFlow& b) {
                     if (a.total != b.total) return a.total > b.total;
                     return a.node_id < b.node_id;
                   });
  if (ranked.size() > limit) ranked.resize(limit);
  return ranked;
}

bool TrafficGraph::HasNode(std::string_view id) const {
  std::shared_lock topology(*topology_mutex_);
  return nodes_.find(id) != nodes_.end();
}

std::size_t TrafficGraph::node_count() const {
  std::shared_lock topology(*topology_mutex_);
  return nodes_.size();
}

std::size_t TrafficGraph::edge_count() const {
  std::shared_lock topology(*topology_mutex_);
  return edges_.size();
}

std::vector<CameraNode> TrafficGraph::Nodes() const {
  std::shared_lock topology(*topology_mutex_);
  std::vector<CameraNode> out;
  out.reserve(nodes_.size());
  for (const auto& [id, entry] : nodes_) out.push_back(entry->node);
  return out;
}

std::vector<RoadEdge> TrafficGraph::Edges() const {
  std::shared_lock topology(*topology_mutex_);
  std::vector<RoadEdge> out;
  out.reserve(edges_.size());
  for (const auto& [key, length] : edges_) {
    out.push_back({key.first, key.second, length});
  }
  return out;
}

std::optional<double> TrafficGraph::EdgeLength(std::string_view from,
                                               std::string_view to) const {
  std::shared_lock topology(*topology_mutex_);
  auto it = edges_.find({std::string(from), std::string(to)});
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint64_t> TrafficGraph::TotalCounts(
    std::string_view node_id) const {
  std::shared_lock topology(*topology_mutex_);
  const NodeEntry& entry = FindNode(node_id);
  std::lock_guard lock(entry.mutex);
  std::vector<std::uint64_t> totals(classes_.size(), 0);
  for (const auto& [start, counts] : entry.state.windows) {
    for (std::size_t c = 0; c < counts.size(); ++c) totals[c] += counts[c];
  }
  return totals;
}

std::vector<std::uint64_t> TrafficGraph::DeadLetterCounts(
    std::string_view node_id) const {
  std::shared_lock topology(*topology_mutex_);
  const NodeEntry& entry = FindNode(node_id);
  std::lock_guard lock(entry.mutex);
  return entry.state.dead_letter;
}

NodeFlowState TrafficGraph::ExportNodeState(std::string_view node_id) const {
  std::shared_lock topology(*topology_mutex_);
  const NodeEntry& entry = FindNode(node_id);
  std::lock_guard lock(entry.mutex);
  return entry.state;
}

void TrafficGraph::ImportNodeState(std::string_view node_id,
                                   NodeFlowState state) {
  if (state.dead_letter.size() != classes_.size()) {
    throw Error(ErrorCode::kClassMapMismatch, "dead-letter vector length");
  }
  for (const auto& [start, counts] : state.windows) {
    if (counts.size() != classes_.size()) {
      throw Error(ErrorCode::kClassMapMismatch, "window vector length");
    }
    if (WindowStart(start) != start) {
      throw Error(ErrorCode::kInvalidInput,
                  "window start " + std::to_string(start) + " is not aligned");
    }
  }
  std::shared_lock topology(*topology_mutex_);
  NodeEntry& entry = FindNode(node_id);
  std::lock_guard lock(entry.mutex);
  entry.state = std::move(state);
}

}  // namespace vflow
