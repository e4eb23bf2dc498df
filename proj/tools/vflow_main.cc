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

// vflow: command-line entry point.
//
// Exit codes: 0 success, 1 internal error, 2 usage error, 3 parse error
// (malformed input files), 4 data error (valid syntax, invalid content such
// as unknown classes or nodes), 5 I/O error.
//
// Option precedence: command-line flag, then VFLOW_* environment variable,
// then the --config file ("key = value" lines, optionally under a
// [subcommand] section header).

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vflow/annotation.h"
#include "vflow/dataset.h"
#include "vflow/error.h"
#include "vflow/eval_io.h"
#include "vflow/evaluate.h"
#include "vflow/graph_io.h"
#include "vflow/ingest.h"
#include "vflow/server.h"
#include "vflow/simulator.h"

namespace fs = std::filesystem;

namespace vflow {
namespace {

enum ExitCode {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitData = 4,
  kExitIo = 5,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kWireError:
    case ErrorCode::kVersionError:
    case ErrorCode::kSnapshotError:
      return kExitParse;
    case ErrorCode::kIOError:
      return kExitIo;
    default:
      return kExitData;
  }
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIOError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIOError, "cannot write " + path.string());
  return out;
}

void RequireFlag(bool present, const std::string& flag) {
  if (!present) throw UsageError(flag + " is required");
}

void CheckUnit(double value, const std::string& flag) {
  if (!(value > 0.0 && value <= 1.0)) {
    throw UsageError(flag + " must lie in (0, 1]");
  }
}

bool CiMode(bool ci_flag) {
  const char* ci = std::getenv("CI");
  return ci_flag || (ci != nullptr && *ci != '\0' && std::string(ci) != "0" &&
                     std::string(ci) != "false");
}

// "key = value" settings keyed by section ("" for the top level).
using ConfigFile = std::map<std::string, std::map<std::string, std::string>>;

ConfigFile ReadConfigFile(const fs::path& path) {
  std::istringstream in(ReadFile(path));
  ConfigFile config;
  std::string section;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, path.string() + ":" +
                                              std::to_string(line_no) +
                                              ": expected key = value");
    }
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    config[section][trim(line.substr(0, eq))] = value;
  }
  return config;
}

// Fills options that neither a flag nor the environment provided.
void ApplyConfigFile(CLI::App& sub, const ConfigFile& config) {
  for (const std::string& section : {std::string(), sub.get_name()}) {
    auto it = config.find(section);
    if (it == config.end()) continue;
    for (const auto& [key, value] : it->second) {
      CLI::Option* opt = sub.get_option_no_throw("--" + key);
      if (opt == nullptr) {
        if (section.empty()) continue;
        throw UsageError("config file: unknown option '" + key + "' for " +
                         sub.get_name());
      }
      if (opt->count() > 0) continue;
      opt->add_result(value);
      opt->run_callback();
    }
  }
}

ClassMap LoadClasses(const std::string& path) {
  if (path.empty()) return ClassMap::Default();
  std::istringstream in(ReadFile(path));
  return ReadClassList(in);
}

struct GraphFlags {
  std::string graph_path;
  long long window_ms = 60'000;
  long long lateness_ms = 300'000;
  double confidence_cutoff = 0.25;

  GraphConfig config() const {
    GraphConfig c;
    c.window_ms = window_ms;
    c.lateness_ms = lateness_ms < 0 ? std::nullopt
                                    : std::optional<TimestampMs>(lateness_ms);
    return c;
  }
};

void AddGraphFlags(CLI::App* sub, GraphFlags& flags) {
  sub->add_option("--graph", flags.graph_path,
                  "Graph definition file (node/edge records)");
  sub->add_option("--window-ms", flags.window_ms, "Tumbling window width")
      ->envname("VFLOW_WINDOW_MS");
  sub->add_option("--lateness-ms", flags.lateness_ms,
                  "Lateness horizon; negative keeps every late event")
      ->envname("VFLOW_LATENESS_MS");
  sub->add_option("--confidence-cutoff", flags.confidence_cutoff,
                  "Minimum detection confidence counted as a vehicle")
      ->envname("VFLOW_CONFIDENCE_CUTOFF");
}

TrafficGraph LoadGraph(const GraphFlags& flags, const ClassMap& classes) {
  RequireFlag(!flags.graph_path.empty(), "--graph");
  std::istringstream in(ReadFile(flags.graph_path));
  return ReadGraphDefinition(in, classes, flags.config());
}

void WriteSummary(const std::string& path, const nlohmann::json& summary) {
  if (path.empty()) return;
  auto out = OpenOut(path);
  out << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------- convert

struct ConvertFlags {
  std::string voc_dir;
  std::string out_dir;
  std::string classes;
  std::string manifest_out;
  std::string summary;
  bool skip_bad = false;
};

int RunConvert(const ConvertFlags& flags) {
  RequireFlag(!flags.voc_dir.empty(), "--voc-dir");
  RequireFlag(!flags.out_dir.empty(), "--out-dir");
  const ClassMap classes = LoadClasses(flags.classes);
  if (!fs::is_directory(flags.voc_dir)) {
    throw Error(ErrorCode::kIOError, "not a directory: " + flags.voc_dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(flags.voc_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  fs::create_directories(flags.out_dir);

  DatasetManifest manifest;
  std::size_t converted = 0;
  std::size_t failed = 0;
  std::set<std::string> unknown;
  std::vector<std::string> warnings;
  for (const auto& file : files) {
    try {
      ImageRecord record = ParseVoc(ReadFile(file), classes, &warnings);
      record.id = file.stem().string();
      auto out = OpenOut(fs::path(flags.out_dir) / (record.id + ".txt"));
      out << WriteYoloTxt(record);
      manifest.records.push_back(std::move(record));
      manifest.splits.push_back(Split::kTrain);
      ++converted;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnknownClass) {
        std::string what = e.what();
        unknown.insert(what.substr(what.find(": ") + 2));
      }
      if (!flags.skip_bad) {
        std::cerr << "vflow convert: " << file.string() << ": " << e.what()
                  << '\n';
        return ExitCodeFor(e.code());
      }
      std::cerr << "skipped " << file.string() << ": " << e.what() << '\n';
      ++failed;
    }
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (!flags.manifest_out.empty()) {
    auto out = OpenOut(flags.manifest_out);
    WriteManifest(manifest, out);
  }
  std::cout << "converted " << converted << " failed " << failed << '\n';
  if (!unknown.empty()) {
    std::cout << "unknown classes:";
    for (const auto& name : unknown) std::cout << ' ' << name;
    std::cout << '\n';
  }
  WriteSummary(flags.summary, {{"converted", converted},
                               {"failed", failed},
                               {"warnings", warnings.size()},
                               {"unknown_classes", unknown}});
  return kExitOk;
}

// ---------------------------------------------------------------- split

struct SplitFlags {
  std::string manifest;
  std::string out;
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
  std::optional<std::uint64_t> seed;
  bool ci = false;
  std::string summary;
};

int RunSplit(const SplitFlags& flags) {
  RequireFlag(!flags.manifest.empty(), "--manifest");
  RequireFlag(!flags.out.empty(), "--out");
  if (CiMode(flags.ci) && !flags.seed) {
    throw UsageError("--seed is required in CI mode");
  }
  std::istringstream in(ReadFile(flags.manifest));
  DatasetManifest input = ReadManifest(in);
  const std::uint64_t seed = flags.seed.value_or(0);
  const DatasetManifest manifest = SplitDataset(
      std::move(input.records), {flags.train, flags.valid, flags.test}, seed);
  auto out = OpenOut(flags.out);
  WriteManifest(manifest, out);
  const SplitSizes sizes = manifest.Sizes();
  std::cout << "train " << sizes.train << " valid " << sizes.valid << " test "
            << sizes.test << " seed " << seed << '\n';
  WriteSummary(flags.summary, {{"train", sizes.train},
                               {"valid", sizes.valid},
                               {"test", sizes.test},
                               {"seed", seed}});
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateFlags {
  std::string detections;
  std::string manifest;
  std::string labels;
  std::string classes;
  std::string out_dir;
  double iou = 0.5;
  double confusion_iou = 0.5;
  double confusion_confidence = 0.25;
  std::optional<double> fixed_confidence;
};

int RunEvaluate(const EvaluateFlags& flags) {
  RequireFlag(!flags.detections.empty(), "--detections");
  RequireFlag(!flags.manifest.empty(), "--manifest");
  RequireFlag(!flags.labels.empty(), "--labels");
  CheckUnit(flags.iou, "--iou");
  CheckUnit(flags.confusion_iou, "--confusion-iou");
  CheckUnit(flags.confusion_confidence, "--conf");
  if (flags.fixed_confidence) {
    CheckUnit(*flags.fixed_confidence, "--fixed-confidence");
  }
  const ClassMap classes = LoadClasses(flags.classes);

  std::istringstream manifest_in(ReadFile(flags.manifest));
  DatasetManifest manifest = ReadManifest(manifest_in);
  AttachYoloLabels(manifest, flags.labels, classes);
  std::istringstream det_in(ReadFile(flags.detections));
  const std::vector<Detection> detections =
      ReadDetections(det_in, manifest, classes);

  EvalConfig config;
  config.iou_threshold = flags.iou;
  config.confusion_iou_threshold = flags.confusion_iou;
  config.confusion_confidence_threshold = flags.confusion_confidence;
  config.fixed_confidence = flags.fixed_confidence;
  const EvalReport report = Evaluate(detections, manifest, classes, config);
  const auto rows = report.Rows();

  std::cout << FormatMetricsTable(rows);
  if (!flags.out_dir.empty()) {
    const fs::path dir(flags.out_dir);
    auto table = OpenOut(dir / "report.csv");
    WriteMetricsCsv(rows, table, false);
    auto full = OpenOut(dir / "report_full.csv");
    WriteMetricsCsv(rows, full, true);
    auto counts = OpenOut(dir / "confusion_counts.csv");
    WriteConfusionCsv(report.confusion, classes, counts, false);
    auto normalized = OpenOut(dir / "confusion_normalized.csv");
    WriteConfusionCsv(report.confusion, classes, normalized, true);
    auto curves = OpenOut(dir / "pr_curves.csv");
    WritePrCurvesCsv(report, classes, curves);
    auto summary = OpenOut(dir / "summary.json");
    summary << SummaryJson(report, classes) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportFlags {
  std::string table;
  std::string out;
};

int RunReport(const ReportFlags& flags) {
  RequireFlag(!flags.table.empty(), "--table");
  std::istringstream in(ReadFile(flags.table));
  std::vector<MetricsRow> rows = ReadMetricsCsv(in);
  rows.insert(rows.begin(), MacroAverage(rows));
  std::cout << FormatMetricsTable(rows);
  if (!flags.out.empty()) {
    auto out = OpenOut(flags.out);
    WriteMetricsCsv(rows, out, true);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  std::string graph;
  std::vector<std::string> cameras;
  std::string classes;
  double rate = 1.0;
  std::vector<std::string> class_rates;
  long long duration_ms = 600'000;
  long long interval_ms = 1'000;
  long long start_ms = 1'700'000'000'000;
  std::optional<std::uint64_t> seed;
  bool ci = false;
  std::string out;
  std::string endpoint;
  std::string summary;
};

std::pair<std::string, std::uint16_t> ParseEndpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon + 1 == text.size()) {
    throw UsageError("endpoint must be host:port, got '" + text + "'");
  }
  long long port = 0;
  try {
    port = ParseInteger(text.substr(colon + 1), "port");
  } catch (const Error&) {
    throw UsageError("bad port in '" + text + "'");
  }
  if (port < 0 || port > 65535) throw UsageError("port out of range");
  return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

int RunSimulate(const SimulateFlags& flags) {
  if (CiMode(flags.ci) && !flags.seed) {
    throw UsageError("--seed is required in CI mode");
  }
  if (flags.out.empty() == flags.endpoint.empty()) {
    throw UsageError("exactly one of --out or --endpoint is required");
  }
  const ClassMap classes = LoadClasses(flags.classes);

  SimulatorConfig config;
  if (!flags.graph.empty()) {
    std::istringstream in(ReadFile(flags.graph));
    for (const auto& node : ReadGraphDefinition(in, classes).Nodes()) {
      config.cameras.push_back(node.id);
    }
  }
  config.cameras.insert(config.cameras.end(), flags.cameras.begin(),
                        flags.cameras.end());
  if (config.cameras.empty()) throw UsageError("--graph or --cameras required");
  config.rates_per_minute.assign(classes.size(), flags.rate);
  for (const auto& spec : flags.class_rates) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--class-rate expects name=rate, got '" + spec + "'");
    }
    config.rates_per_minute[classes.Lookup(spec.substr(0, eq))] =
        ParseDouble(spec.substr(eq + 1), "--class-rate");
  }
  config.duration_ms = flags.duration_ms;
  config.frame_interval_ms = flags.interval_ms;
  config.start_ms = flags.start_ms;
  config.seed = flags.seed.value_or(0);

  SimulationTotals totals;
  std::uint64_t acked = 0;
  std::uint64_t rejected = 0;
  if (!flags.out.empty()) {
    auto out = OpenOut(flags.out);
    totals = SimulateCameras(config, [&out](const DetectionEvent& e) {
      out << EncodeEvent(e) << '\n';
    });
  } else {
    const auto [host, port] = ParseEndpoint(flags.endpoint);
    LineClient client(host, port);
    // Replies are drained concurrently so neither side blocks on a full
    // socket buffer.
    std::thread reader([&] {
      while (auto reply = client.ReadLine()) {
        if (*reply == "ok") {
          ++acked;
        } else {
          ++rejected;
          std::cerr << "server: " << *reply << '\n';
        }
      }
    });
    totals = SimulateCameras(config, [&client](const DetectionEvent& e) {
      client.WriteLine(EncodeEvent(e));
    });
    client.FinishWriting();
    reader.join();
  }

  std::cout << "events " << totals.events << " vehicles " << totals.vehicles
            << '\n';
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (totals.per_class[c] > 0) {
      std::cout << "  " << classes.name(static_cast<ClassId>(c)) << ' '
                << totals.per_class[c] << '\n';
    }
  }
  if (!flags.endpoint.empty()) {
    std::cout << "acknowledged " << acked << " rejected " << rejected << '\n';
  }
  WriteSummary(flags.summary, {{"events", totals.events},
                               {"vehicles", totals.vehicles},
                               {"per_class", totals.per_class},
                               {"per_camera", totals.per_camera},
                               {"seed", config.seed}});
  return kExitOk;
}

// ---------------------------------------------------------------- serve

std::atomic<bool> g_stop_requested{false};

extern "C" void HandleStopSignal(int) { g_stop_requested = true; }

struct ServeFlags {
  GraphFlags graph;
  std::string classes;
  std::string listen = "127.0.0.1:7070";
  std::string snapshot_out;
  double run_seconds = 0.0;
};

int RunServe(const ServeFlags& flags) {
  const ClassMap classes = LoadClasses(flags.classes);
  TrafficGraph graph = LoadGraph(flags.graph, classes);
  const auto [host, port] = ParseEndpoint(flags.listen);
  ServerConfig config;
  config.host = host;
  config.port = port;
  config.ingest.confidence_cutoff = flags.graph.confidence_cutoff;

  IngestServer server(graph, config);
  server.Start();
  std::cout << "listening on " << host << ':' << server.port() << std::endl;

  std::signal(SIGINT, HandleStopSignal);
  std::signal(SIGTERM, HandleStopSignal);
  const auto started = std::chrono::steady_clock::now();
  while (!g_stop_requested.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    if (flags.run_seconds > 0.0 &&
        std::chrono::steady_clock::now() - started >=
            std::chrono::duration<double>(flags.run_seconds)) {
      break;
    }
  }
  server.Stop();
  const ServerStats stats = server.stats();
  std::cout << "connections " << stats.connections << " accepted "
            << stats.accepted << " rejected " << stats.rejected
            << " decode_errors " << stats.decode_errors << " vehicles "
            << stats.vehicles << std::endl;
  if (!flags.snapshot_out.empty()) {
    auto out = OpenOut(flags.snapshot_out);
    WriteSnapshot(graph, out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- replay

struct ReplayFlags {
  GraphFlags graph;
  std::string classes;
  std::string events;
  double speed = 0.0;
  std::string snapshot_out;
  std::string summary;
};

int RunReplay(const ReplayFlags& flags) {
  RequireFlag(!flags.events.empty(), "--events");
  if (flags.speed < 0.0) throw UsageError("--speed must be >= 0");
  const ClassMap classes = LoadClasses(flags.classes);
  TrafficGraph graph = LoadGraph(flags.graph, classes);
  const ReplaySummary summary = ReplayFile(
      flags.events, graph, flags.speed, {flags.graph.confidence_cutoff});
  for (const auto& e : summary.errors) std::cerr << e << '\n';
  std::cout << "events " << summary.events << " rejects " << summary.rejects
            << " late " << summary.late << " vehicles " << summary.vehicles
            << " seconds " << summary.duration.count() << '\n';
  if (!flags.snapshot_out.empty()) {
    auto out = OpenOut(flags.snapshot_out);
    WriteSnapshot(graph, out);
  }
  WriteSummary(flags.summary, {{"lines", summary.lines},
                               {"events", summary.events},
                               {"rejects", summary.rejects},
                               {"malformed", summary.malformed},
                               {"late", summary.late},
                               {"vehicles", summary.vehicles},
                               {"seconds", summary.duration.count()}});
  return kExitOk;
}

// ---------------------------------------------------------------- query

struct QueryFlags {
  std::string snapshot;
  GraphFlags graph;
  std::string classes;
  std::string events;
  std::string node;
  std::optional<long long> from_ms;
  std::optional<long long> to_ms;
  std::vector<std::string> class_filter;
  std::size_t top = 0;
  std::string summary;
};

int RunQuery(const QueryFlags& flags) {
  if (flags.node.empty() == (flags.top == 0)) {
    throw UsageError("exactly one of --node or --top is required");
  }
  std::optional<TrafficGraph> graph;
  if (!flags.snapshot.empty()) {
    std::istringstream in(ReadFile(flags.snapshot));
    graph.emplace(ReadSnapshot(in));
  } else {
    RequireFlag(!flags.events.empty(), "--snapshot or --events");
    graph.emplace(LoadGraph(flags.graph, LoadClasses(flags.classes)));
    ReplayFile(flags.events, *graph, 0.0, {flags.graph.confidence_cutoff});
  }
  const ClassMap& classes = graph->classes();

  std::vector<ClassId> filter;
  for (const auto& name : flags.class_filter) filter.push_back(classes.Lookup(name));

  // Default range: every stored window.
  TimestampMs lo = std::numeric_limits<TimestampMs>::max();
  TimestampMs hi = std::numeric_limits<TimestampMs>::min();
  for (const auto& node : graph->Nodes()) {
    const auto state = graph->ExportNodeState(node.id);
    if (state.windows.empty()) continue;
    lo = std::min(lo, state.windows.begin()->first);
    hi = std::max(hi, state.windows.rbegin()->first + graph->config().window_ms);
  }
  if (lo > hi) lo = hi = 0;
  const TimeRange range{flags.from_ms.value_or(lo), flags.to_ms.value_or(hi)};
  if (range.begin_ms > range.end_ms) throw UsageError("--from after --to");

  nlohmann::json summary;
  if (flags.top > 0) {
    const auto ranked = graph->TopNodesByFlow(range, filter, flags.top);
    std::cout << "rank,node,total\n";
    summary = nlohmann::json::array();
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::cout << i + 1 << ',' << ranked[i].node_id << ',' << ranked[i].total
                << '\n';
      summary.push_back({{"node", ranked[i].node_id},
                         {"total", ranked[i].total}});
    }
  } else {
    const auto windows = graph->QueryFlow(flags.node, range, filter);
    std::vector<ClassId> columns = filter;
    if (columns.empty()) {
      for (ClassId c = 0; c < classes.size(); ++c) columns.push_back(c);
    }
    std::cout << "start_ms";
    for (ClassId c : columns) std::cout << ',' << classes.name(c);
    std::cout << ",total\n";
    std::vector<std::uint64_t> totals(classes.size(), 0);
    summary = nlohmann::json::array();
    for (const auto& w : windows) {
      std::cout << w.start_ms;
      for (ClassId c : columns) std::cout << ',' << w.counts[c];
      std::cout << ',' << w.total() << '\n';
      for (std::size_t c = 0; c < totals.size(); ++c) totals[c] += w.counts[c];
      summary.push_back({{"start_ms", w.start_ms}, {"counts", w.counts}});
    }
    std::cout << "total";
    std::uint64_t grand = 0;
    for (ClassId c : columns) {
      std::cout << ',' << totals[c];
      grand += totals[c];
    }
    std::cout << ',' << grand << '\n';
  }
  WriteSummary(flags.summary, summary);
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"vflow: vehicle detection evaluation and traffic flow toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "Settings file; flags and VFLOW_* variables take precedence")
      ->envname("VFLOW_CONFIG");

  ConvertFlags convert;
  auto* convert_cmd =
      app.add_subcommand("convert", "Convert PASCAL VOC XML to YOLO TXT");
  convert_cmd->add_option("--voc-dir", convert.voc_dir, "Directory of .xml");
  convert_cmd->add_option("--out-dir", convert.out_dir, "Output directory");
  convert_cmd->add_option("--classes", convert.classes, "Class list file")
      ->envname("VFLOW_CLASSES");
  convert_cmd->add_option("--manifest-out", convert.manifest_out,
                          "Also write a manifest of converted images");
  convert_cmd->add_option("--summary", convert.summary, "JSON summary path");
  convert_cmd->add_flag("--skip-bad", convert.skip_bad,
                        "Count bad documents instead of failing");

  SplitFlags split;
  auto* split_cmd =
      app.add_subcommand("split", "Assign train/valid/test splits");
  split_cmd->add_option("--manifest", split.manifest, "Input manifest");
  split_cmd->add_option("--out", split.out, "Output manifest");
  split_cmd->add_option("--train", split.train, "Train fraction");
  split_cmd->add_option("--valid", split.valid, "Validation fraction");
  split_cmd->add_option("--test", split.test, "Test fraction");
  split_cmd->add_option("--seed", split.seed, "Shuffle seed")
      ->envname("VFLOW_SEED");
  split_cmd->add_flag("--ci", split.ci, "Require an explicit seed");
  split_cmd->add_option("--summary", split.summary, "JSON summary path");

  EvaluateFlags evaluate;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Score detections on the test split");
  eval_cmd->add_option("--detections", evaluate.detections, "Detections file");
  eval_cmd->add_option("--manifest", evaluate.manifest, "Manifest with splits");
  eval_cmd->add_option("--labels", evaluate.labels, "YOLO label directory");
  eval_cmd->add_option("--classes", evaluate.classes, "Class list file")
      ->envname("VFLOW_CLASSES");
  eval_cmd->add_option("--out-dir", evaluate.out_dir, "Report directory");
  eval_cmd->add_option("--iou", evaluate.iou, "IoU threshold for AP, P, R")
      ->envname("VFLOW_IOU");
  eval_cmd->add_option("--confusion-iou", evaluate.confusion_iou,
                       "IoU threshold for the confusion matrix");
  eval_cmd->add_option("--conf", evaluate.confusion_confidence,
                       "Confidence threshold for the confusion matrix")
      ->envname("VFLOW_CONF");
  eval_cmd->add_option("--fixed-confidence", evaluate.fixed_confidence,
                       "Report P/R at this confidence instead of best F1");

  ReportFlags report;
  auto* report_cmd = app.add_subcommand(
      "report", "Macro-average a per-class metrics table into an 'all' row");
  report_cmd->add_option("--table", report.table, "Per-class metrics CSV");
  report_cmd->add_option("--out", report.out, "Write the full table here");

  SimulateFlags simulate;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Generate synthetic camera events");
  sim_cmd->add_option("--graph", simulate.graph, "Use the graph's nodes");
  sim_cmd->add_option("--cameras", simulate.cameras, "Camera ids")
      ->delimiter(',');
  sim_cmd->add_option("--classes", simulate.classes, "Class list file")
      ->envname("VFLOW_CLASSES");
  sim_cmd->add_option("--rate", simulate.rate,
                      "Vehicles per minute for every class");
  sim_cmd->add_option("--class-rate", simulate.class_rates,
                      "Per-class override, name=rate (repeatable)");
  sim_cmd->add_option("--duration-ms", simulate.duration_ms, "Duration");
  sim_cmd->add_option("--interval-ms", simulate.interval_ms, "Frame interval");
  sim_cmd->add_option("--start-ms", simulate.start_ms, "First timestamp");
  sim_cmd->add_option("--seed", simulate.seed, "Random seed")
      ->envname("VFLOW_SEED");
  sim_cmd->add_flag("--ci", simulate.ci, "Require an explicit seed");
  sim_cmd->add_option("--out", simulate.out, "Write events to this file");
  sim_cmd->add_option("--endpoint", simulate.endpoint,
                      "Stream events to host:port");
  sim_cmd->add_option("--summary", simulate.summary, "JSON summary path");

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the ingestion server");
  AddGraphFlags(serve_cmd, serve.graph);
  serve_cmd->add_option("--classes", serve.classes, "Class list file")
      ->envname("VFLOW_CLASSES");
  serve_cmd->add_option("--listen", serve.listen, "host:port")
      ->envname("VFLOW_LISTEN");
  serve_cmd->add_option("--snapshot-out", serve.snapshot_out,
                        "Write a snapshot on shutdown");
  serve_cmd->add_option("--run-seconds", serve.run_seconds,
                        "Stop after this many seconds (0 waits for a signal)");

  ReplayFlags replay;
  auto* replay_cmd =
      app.add_subcommand("replay", "Feed a recorded event file into a graph");
  AddGraphFlags(replay_cmd, replay.graph);
  replay_cmd->add_option("--classes", replay.classes, "Class list file")
      ->envname("VFLOW_CLASSES");
  replay_cmd->add_option("--events", replay.events, "Wire-format event file");
  replay_cmd->add_option("--speed", replay.speed,
                         "Time scale; 0 replays as fast as possible");
  replay_cmd->add_option("--snapshot-out", replay.snapshot_out,
                         "Write the resulting graph snapshot");
  replay_cmd->add_option("--summary", replay.summary, "JSON summary path");

  QueryFlags query;
  auto* query_cmd = app.add_subcommand("query", "Query flow windows");
  query_cmd->add_option("--snapshot", query.snapshot, "Graph snapshot");
  AddGraphFlags(query_cmd, query.graph);
  query_cmd->add_option("--classes", query.classes, "Class list file")
      ->envname("VFLOW_CLASSES");
  query_cmd->add_option("--events", query.events,
                        "Replay this file into --graph instead of a snapshot");
  query_cmd->add_option("--node", query.node, "Node to query");
  query_cmd->add_option("--from", query.from_ms, "Range start (ms)");
  query_cmd->add_option("--to", query.to_ms, "Range end (ms, exclusive)");
  query_cmd->add_option("--class", query.class_filter, "Class names")
      ->delimiter(',');
  query_cmd->add_option("--top", query.top, "Rank the N busiest nodes");
  query_cmd->add_option("--summary", query.summary, "JSON summary path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) ApplyConfigFile(*sub, ReadConfigFile(config_path));
    if (sub == convert_cmd) return RunConvert(convert);
    if (sub == split_cmd) return RunSplit(split);
    if (sub == eval_cmd) return RunEvaluate(evaluate);
    if (sub == report_cmd) return RunReport(report);
    if (sub == sim_cmd) return RunSimulate(simulate);
    if (sub == serve_cmd) return RunServe(serve);
    if (sub == replay_cmd) return RunReplay(replay);
    if (sub == query_cmd) return RunQuery(query);
  } catch (const UsageError& e) {
    std::cerr << "vflow: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "vflow: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "vflow: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "vflow: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace
}  // namespace vflow

int main(int argc, char** argv) { return vflow::Main(argc, argv); }
