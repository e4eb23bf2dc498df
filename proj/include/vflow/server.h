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

#ifndef VFLOW_SERVER_H_
#define VFLOW_SERVER_H_

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "vflow/ingest.h"

namespace vflow {

struct ServerConfig {
  std::string host = "127.0.0.1";
  // 0 picks an ephemeral port; see IngestServer::port().
  std::uint16_t port = 7070;
  IngestOptions ingest;
  std::size_t max_line_bytes = 1 << 20;
};

struct ServerStats {
  std::uint64_t connections = 0;
  std::uint64_t accepted = 0;
  std::uint64_t late = 0;
  std::uint64_t rejected = 0;
  std::uint64_t decode_errors = 0;
  std::uint64_t vehicles = 0;
};

// TCP ingestion endpoint. Clients send newline-terminated wire records and
// receive one reply line per record, in order:
//
//   ok                      event applied (or dead-lettered as late)
//   reject <reason>         unknown camera or class; connection stays open
//   error <message>         undecodable record; the server then closes
//
// Each connection is served by its own thread and reads only as fast as the
// graph absorbs events, so a slow writer pushes back on clients through TCP
// flow control. Stop() stops accepting, processes every complete record
// already received, and joins all connection threads.
class IngestServer {
 public:
  IngestServer(TrafficGraph& graph, ServerConfig config);
  ~IngestServer();

  IngestServer(const IngestServer&) = delete;
  IngestServer& operator=(const IngestServer&) = delete;

  // Binds and starts accepting. Throws Error(kIOError) on bind failure.
  void Start();
  void Stop();

  std::uint16_t port() const { return bound_port_; }
  ServerStats stats() const;

 private:
  struct Connection {
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void AcceptLoop();
  void Serve(int fd);
  void ReapFinished();

  ServerConfig config_;
  EventSink sink_;
  int listen_fd_ = -1;
  std::uint16_t bound_port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> connections_{0};
  std::atomic<std::uint64_t> decode_errors_{0};
  std::thread acceptor_;
  std::mutex connections_mutex_;
  std::list<std::unique_ptr<Connection>> live_;
};

// Blocking line-oriented TCP client used by the simulator and tests.
class LineClient {
 public:
  // Throws Error(kIOError) when the connection fails.
  LineClient(const std::string& host, std::uint16_t port);
  ~LineClient();

  LineClient(const LineClient&) = delete;
  LineClient& operator=(const LineClient&) = delete;

  // Appends '\n'. Returns false once the peer has gone away.
  bool WriteLine(std::string_view line);
  // Next reply line without its newline, or nullopt at end of stream.
  std::optional<std::string> ReadLine();
  // Half-closes the sending side so the server sees end of stream.
  void FinishWriting();

 private:
  int fd_ = -1;
  std::string buffer_;
};

}  // namespace vflow

#endif  // VFLOW_SERVER_H_
