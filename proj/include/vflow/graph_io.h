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

#ifndef VFLOW_GRAPH_IO_H_
#define VFLOW_GRAPH_IO_H_

#include <iosfwd>

#include "vflow/traffic_graph.h"

namespace vflow {

// Graph definition file, one record per line ('#' starts a comment):
//
//   node <id> <label> [<lat> <lon>]
//   edge <from> <to> <length_m> <one_way>
//
// Ids and labels containing spaces are written in double quotes. one_way
// accepts 1/0, true/false, yes/no. Throws Error(kParseError) with the line
// number, or the graph's own errors for invalid topology.
TrafficGraph ReadGraphDefinition(std::istream& in, ClassMap classes,
                                 GraphConfig config = {});
// Two-way roads are written as a single record.
void WriteGraphDefinition(const TrafficGraph& graph, std::ostream& out);

inline constexpr int kSnapshotVersion = 1;

// Versioned, line-oriented snapshot of topology and window stores. Layout:
//
//   VFLOW-SNAPSHOT <version>
//   classes <k> <name>...
//   config <window_ms> <lateness_ms | none>
//   node <id> <label> <0 | 1 <lat> <lon>>
//   edge <from> <to> <length_m>
//   state <id> <watermark | none> <dead-letter count x k>
//   window <id> <start_ms> <count x k>
//   end <record count>
//
// Strings are double-quoted with backslash escapes; doubles use the shortest
// round-trip form.
void WriteSnapshot(const TrafficGraph& graph, std::ostream& out);
// Throws Error(kSnapshotError) naming the version on any corruption.
TrafficGraph ReadSnapshot(std::istream& in);

}  // namespace vflow

#endif  // VFLOW_GRAPH_IO_H_
