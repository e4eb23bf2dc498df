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

#include "vflow/graph_io.h"

#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "vflow/annotation.h"
#include "vflow/error.h"

namespace vflow {
namespace {

std::string Quote(const std::string& s) {
  std::ostringstream out;
  out << std::quoted(s);
  return out.str();
}

bool ParseBool(const std::string& token, bool& value) {
  if (token == "1" || token == "true" || token == "yes") {
    value = true;
    return true;
  }
  if (token == "0" || token == "false" || token == "no") {
    value = false;
    return true;
  }
  return false;
}

// Reads one quoted-or-bare token; fails the stream at end of line.
bool NextToken(std::istringstream& in, std::string& token) {
  return static_cast<bool>(in >> std::quoted(token));
}

std::string StripComment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

class SnapshotReader {
 public:
  explicit SnapshotReader(std::istream& in) : in_(in) {}

  TrafficGraph Read() {
    std::string magic;
    if (!NextLine() || !(line_ >> magic) || magic != "VFLOW-SNAPSHOT") {
      Fail("missing VFLOW-SNAPSHOT header");
    }
    std::string version_token;
    line_ >> version_token;
    if (version_token != std::to_string(kSnapshotVersion)) {
      throw Error(ErrorCode::kSnapshotError,
                  "unsupported snapshot version '" + version_token +
                      "' (reader supports version " +
                      std::to_string(kSnapshotVersion) + ")");
    }

    Expect("classes");
    const std::size_t k = ReadCount();
    std::vector<std::string> names(k);
    for (auto& name : names) name = ReadString();
    Finish();

    Expect("config");
    GraphConfig config;
    config.window_ms = ReadInt();
    const std::string lateness = ReadString();
    config.lateness_ms = lateness == "none"
                             ? std::nullopt
                             : std::optional<TimestampMs>(Int(lateness));
    Finish();

    std::optional<TrafficGraph> graph;
    try {
      graph.emplace(ClassMap(std::move(names)), config);
    } catch (const Error& e) {
      Fail(e.what());
    }

    std::size_t records = 0;
    std::map<std::string, NodeFlowState> states;
    while (true) {
      if (!NextLine()) Fail("truncated snapshot, no end record");
      std::string kind;
      line_ >> kind;
      if (kind == "end") {
        if (static_cast<std::size_t>(ReadInt()) != records) {
          Fail("record count mismatch");
        }
        Finish();
        break;
      }
      ++records;
      try {
        if (kind == "node") {
          CameraNode node;
          node.id = ReadString();
          node.label = ReadString();
          if (ReadInt() == 1) node.coords = GeoPoint{ReadDouble(), ReadDouble()};
          Finish();
          states[node.id].dead_letter.assign(k, 0);
          graph->AddNode(std::move(node));
        } else if (kind == "edge") {
          const std::string from = ReadString();
          const std::string to = ReadString();
          const double length = ReadDouble();
          Finish();
          graph->AddRoad(from, to, length, /*one_way=*/true);
        } else if (kind == "state") {
          NodeFlowState& state = Known(states, ReadString());
          const std::string watermark = ReadString();
          if (watermark != "none") state.watermark = Int(watermark);
          state.dead_letter = ReadCounts(k);
          Finish();
        } else if (kind == "window") {
          NodeFlowState& state = Known(states, ReadString());
          const TimestampMs start = ReadInt();
          if (!state.windows.emplace(start, ReadCounts(k)).second) {
            Fail("duplicate window");
          }
          Finish();
        } else {
          Fail("unknown record '" + kind + "'");
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kSnapshotError) throw;
        Fail(e.what());
      }
    }
    for (auto& [id, state] : states) {
      try {
        graph->ImportNodeState(id, std::move(state));
      } catch (const Error& e) {
        Fail(e.what());
      }
    }
    return std::move(*graph);
  }

 private:
  bool NextLine() {
    std::string text;
    if (!std::getline(in_, text)) return false;
    ++line_no_;
    line_ = std::istringstream(text);
    return true;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kSnapshotError,
                "snapshot version " + std::to_string(kSnapshotVersion) +
                    ", line " + std::to_string(line_no_) + ": " + what);
  }

  void Expect(const char* kind) {
    std::string token;
    if (!NextLine() || !(line_ >> token) || token != kind) {
      Fail(std::string("expected '") + kind + "' record");
    }
  }

  std::string ReadString() {
    std::string token;
    if (!NextToken(line_, token)) Fail("missing field");
    return token;
  }

  TimestampMs Int(const std::string& token) const {
    try {
      return ParseInteger(token, "field");
    } catch (const Error& e) {
      Fail(e.what());
    }
  }

  TimestampMs ReadInt() { return Int(ReadString()); }

  std::size_t ReadCount() {
    const TimestampMs v = ReadInt();
    if (v < 0 || v > 1'000'000) Fail("bad count");
    return static_cast<std::size_t>(v);
  }

  double ReadDouble() {
    const std::string token = ReadString();
    try {
      return ParseDouble(token, "field");
    } catch (const Error& e) {
      Fail(e.what());
    }
  }

  std::vector<std::uint64_t> ReadCounts(std::size_t k) {
    std::vector<std::uint64_t> counts(k);
    for (auto& c : counts) {
      const TimestampMs v = ReadInt();
      if (v < 0) Fail("negative count");
      c = static_cast<std::uint64_t>(v);
    }
    return counts;
  }

  void Finish() {
    std::string extra;
    if (line_ >> extra) Fail("trailing field '" + extra + "'");
  }

  NodeFlowState& Known(std::map<std::string, NodeFlowState>& states,
                       const std::string& id) {
    auto it = states.find(id);
    if (it == states.end()) Fail("state for unknown node '" + id + "'");
    return it->second;
  }

  std::istream& in_;
  std::istringstream line_;
  int line_no_ = 0;
};

}  // namespace

TrafficGraph ReadGraphDefinition(std::istream& in, ClassMap classes,
                                 GraphConfig config) {
  TrafficGraph graph(std::move(classes), config);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream line(StripComment(raw));
    std::string kind;
    if (!(line >> kind)) continue;
    const std::string context = "graph line " + std::to_string(line_no);
    std::vector<std::string> fields;
    std::string token;
    while (NextToken(line, token)) fields.push_back(token);

    if (kind == "node") {
      if (fields.size() != 2 && fields.size() != 4) {
        throw Error(ErrorCode::kParseError,
                    context + ": expected 'node id label [lat lon]'");
      }
      CameraNode node{fields[0], fields[1], std::nullopt};
      if (fields.size() == 4) {
        node.coords = GeoPoint{ParseDouble(fields[2], context),
                               ParseDouble(fields[3], context)};
      }
      graph.AddNode(std::move(node));
    } else if (kind == "edge") {
      bool one_way = false;
      if (fields.size() != 4 || !ParseBool(fields[3], one_way)) {
        throw Error(ErrorCode::kParseError,
                    context + ": expected 'edge from to length one_way'");
      }
      graph.AddRoad(fields[0], fields[1], ParseDouble(fields[2], context),
                    one_way);
    } else {
      throw Error(ErrorCode::kParseError,
                  context + ": unknown record '" + kind + "'");
    }
  }
  return graph;
}

void WriteGraphDefinition(const TrafficGraph& graph, std::ostream& out) {
  for (const auto& node : graph.Nodes()) {
    out << "node " << Quote(node.id) << ' ' << Quote(node.label);
    if (node.coords) {
      out << ' ' << FormatShortest(node.coords->lat) << ' '
          << FormatShortest(node.coords->lon);
    }
    out << '\n';
  }
  std::set<std::pair<std::string, std::string>> written;
  for (const auto& edge : graph.Edges()) {
    if (written.contains({edge.source, edge.target})) continue;
    const auto reverse = graph.EdgeLength(edge.target, edge.source);
    const bool two_way = reverse && *reverse == edge.length_m;
    out << "edge " << Quote(edge.source) << ' ' << Quote(edge.target) << ' '
        << FormatShortest(edge.length_m) << ' ' << (two_way ? 0 : 1) << '\n';
    written.insert({edge.source, edge.target});
    if (two_way) written.insert({edge.target, edge.source});
  }
}

void WriteSnapshot(const TrafficGraph& graph, std::ostream& out) {
  std::size_t records = 0;
  out << "VFLOW-SNAPSHOT " << kSnapshotVersion << '\n';
  out << "classes " << graph.classes().size();
  for (const auto& name : graph.classes().names()) out << ' ' << Quote(name);
  out << '\n';
  out << "config " << graph.config().window_ms << ' '
      << (graph.config().lateness_ms
              ? std::to_string(*graph.config().lateness_ms)
              : std::string("none"))
      << '\n';

  const auto nodes = graph.Nodes();
  for (const auto& node : nodes) {
    out << "node " << Quote(node.id) << ' ' << Quote(node.label) << ' ';
    if (node.coords) {
      out << "1 " << FormatShortest(node.coords->lat) << ' '
          << FormatShortest(node.coords->lon);
    } else {
      out << '0';
    }
    out << '\n';
    ++records;
  }
  for (const auto& edge : graph.Edges()) {
    out << "edge " << Quote(edge.source) << ' ' << Quote(edge.target) << ' '
        << FormatShortest(edge.length_m) << '\n';
    ++records;
  }
  for (const auto& node : nodes) {
    const NodeFlowState state = graph.ExportNodeState(node.id);
    out << "state " << Quote(node.id) << ' '
        << (state.watermark ? std::to_string(*state.watermark)
                            : std::string("none"));
    for (auto c : state.dead_letter) out << ' ' << c;
    out << '\n';
    ++records;
    for (const auto& [start, counts] : state.windows) {
      out << "window " << Quote(node.id) << ' ' << start;
      for (auto c : counts) out << ' ' << c;
      out << '\n';
      ++records;
    }
  }
  out << "end " << records << '\n';
}

TrafficGraph ReadSnapshot(std::istream& in) {
  return SnapshotReader(in).Read();
}

}  // namespace vflow
