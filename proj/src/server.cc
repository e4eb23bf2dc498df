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

#include "vflow/server.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "vflow/error.h"

namespace vflow {
namespace {

constexpr int kPollIntervalMs = 50;
constexpr std::size_t kReadChunk = 64 * 1024;

[[noreturn]] void SystemFail(const std::string& what) {
  throw Error(ErrorCode::kIOError, what + ": " + std::strerror(errno));
}

// Sends everything; false if the peer is gone, or if `abort` is raised while
// the peer is not reading.
bool SendAll(int fd, std::string_view data,
             const std::atomic<bool>* abort = nullptr) {
  while (!data.empty()) {
    const ssize_t n =
        ::send(fd, data.data(), data.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno != EAGAIN && errno != EWOULDBLOCK) return false;
      if (abort != nullptr && abort->load()) return false;
      pollfd p{fd, POLLOUT, 0};
      ::poll(&p, 1, kPollIntervalMs);
      continue;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

addrinfo* Resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                               service.c_str(), &hints, &result);
  if (rc != 0) {
    throw Error(ErrorCode::kIOError,
                "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  return result;
}

}  // namespace

IngestServer::IngestServer(TrafficGraph& graph, ServerConfig config)
    : config_(std::move(config)), sink_(graph, config_.ingest) {}

IngestServer::~IngestServer() { Stop(); }

void IngestServer::Start() {
  addrinfo* addresses = Resolve(config_.host, config_.port, true);
  int fd = -1;
  std::string last_error = "no address";
  for (addrinfo* a = addresses; a != nullptr; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(addresses);
  if (fd < 0) {
    throw Error(ErrorCode::kIOError, "cannot bind " + config_.host + ":" +
                                         std::to_string(config_.port) + ": " +
                                         last_error);
  }

  sockaddr_storage bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  bound_port_ =
      bound.ss_family == AF_INET6
          ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
          : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  listen_fd_ = fd;
  stopping_ = false;
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

void IngestServer::Stop() {
  if (listen_fd_ < 0) return;
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
  std::list<std::unique_ptr<Connection>> connections;
  {
    std::lock_guard lock(connections_mutex_);
    connections.swap(live_);
  }
  for (auto& c : connections) {
    if (c->thread.joinable()) c->thread.join();
  }
}

ServerStats IngestServer::stats() const {
  const IngestStats s = sink_.stats();
  return {connections_.load(), s.accepted(), s.late,
          s.rejected,          decode_errors_.load(), s.vehicles};
}

void IngestServer::ReapFinished() {
  std::lock_guard lock(connections_mutex_);
  for (auto it = live_.begin(); it != live_.end();) {
    if ((*it)->done.load()) {
      (*it)->thread.join();
      it = live_.erase(it);
    } else {
      ++it;
    }
  }
}

void IngestServer::AcceptLoop() {
  while (!stopping_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, kPollIntervalMs);
    ReapFinished();
    if (ready <= 0 || stopping_.load()) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    connections_.fetch_add(1);
    auto connection = std::make_unique<Connection>();
    Connection* raw = connection.get();
    std::lock_guard lock(connections_mutex_);
    connection->thread = std::thread([this, fd, raw] {
      Serve(fd);
      raw->done = true;
    });
    live_.push_back(std::move(connection));
  }
}

void IngestServer::Serve(int fd) {
  std::string buffer;
  std::string replies;
  bool peer_reading = true;
  bool open = true;
  std::vector<char> chunk(kReadChunk);

  // Handles every complete line in `buffer`; false once the connection must
  // close because of a decode error.
  auto process = [&](bool at_eof) {
    std::size_t start = 0;
    bool keep = true;
    while (keep) {
      std::size_t end = buffer.find('\n', start);
      if (end == std::string::npos) {
        if (!at_eof || start >= buffer.size()) break;
        end = buffer.size();
      }
      std::string_view line(buffer.data() + start, end - start);
      start = std::min(end + 1, buffer.size());
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      try {
        switch (sink_.Apply(DecodeEvent(line))) {
          case EventOutcome::kApplied:
          case EventOutcome::kLate:
            replies += "ok\n";
            break;
          case EventOutcome::kUnknownCamera:
            replies += "reject unknown-camera\n";
            break;
          case EventOutcome::kInvalidClass:
            replies += "reject invalid-class\n";
            break;
        }
      } catch (const Error& e) {
        decode_errors_.fetch_add(1);
        std::string message = e.what();
        std::replace(message.begin(), message.end(), '\n', ' ');
        replies += "error " + message + "\n";
        keep = false;
      }
    }
    buffer.erase(0, start);
    if (keep && buffer.size() > config_.max_line_bytes) {
      decode_errors_.fetch_add(1);
      replies += "error line exceeds " +
                 std::to_string(config_.max_line_bytes) + " bytes\n";
      keep = false;
    }
    if (peer_reading && !replies.empty()) {
      peer_reading = SendAll(fd, replies, &stopping_);
    }
    replies.clear();
    return keep;
  };

  while (open) {
    if (stopping_.load()) {
      // Drain whatever the kernel already holds, then close.
      while (open) {
        const ssize_t n = ::recv(fd, chunk.data(), chunk.size(), MSG_DONTWAIT);
        if (n > 0) {
          buffer.append(chunk.data(), static_cast<std::size_t>(n));
          open = process(false);
        } else if (n < 0 && errno == EINTR) {
          continue;
        } else {
          if (n == 0) process(true);
          open = false;
        }
      }
      break;
    }
    pollfd p{fd, POLLIN, 0};
    const int ready = ::poll(&p, 1, kPollIntervalMs);
    if (ready <= 0) continue;
    const ssize_t n = ::recv(fd, chunk.data(), chunk.size(), 0);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      break;
    }
    if (n == 0) {
      process(true);
      break;
    }
    buffer.append(chunk.data(), static_cast<std::size_t>(n));
    open = process(false);
  }
  ::shutdown(fd, SHUT_RDWR);
  ::close(fd);
}

LineClient::LineClient(const std::string& host, std::uint16_t port) {
  addrinfo* addresses = Resolve(host, port, false);
  for (addrinfo* a = addresses; a != nullptr; a = a->ai_next) {
    fd_ = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd_ < 0) continue;
    if (::connect(fd_, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd_);
    fd_ = -1;
  }
  ::freeaddrinfo(addresses);
  if (fd_ < 0) SystemFail("cannot connect to " + host + ":" + std::to_string(port));
  const int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

LineClient::~LineClient() {
  if (fd_ >= 0) ::close(fd_);
}

bool LineClient::WriteLine(std::string_view line) {
  std::string data(line);
  data += '\n';
  return SendAll(fd_, data);
}

std::optional<std::string> LineClient::ReadLine() {
  std::vector<char> chunk(4096);
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    const ssize_t n = ::recv(fd_, chunk.data(), chunk.size(), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return std::nullopt;
    buffer_.append(chunk.data(), static_cast<std::size_t>(n));
  }
}

void LineClient::FinishWriting() { ::shutdown(fd_, SHUT_WR); }

}  // namespace vflow
