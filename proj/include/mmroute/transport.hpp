#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "mmroute/config.hpp"

namespace mmroute::bridge {

/// Owning file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Fd& operator=(Fd&& other) noexcept;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd();

  int get() const { return fd_; }
  explicit operator bool() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

/// Buffered newline-delimited reader/writer over a pair of descriptors.
class LineChannel {
 public:
  LineChannel(int in_fd, int out_fd) : in_(in_fd), out_(out_fd) {}

  /// Next line without its terminator; nullopt at end of stream.
  std::optional<std::string> read_line();
  /// Writes `line` plus '\n'. Throws Error(io) on failure.
  void write_line(const std::string& line);

 private:
  int in_;
  int out_;
  std::string pending_;
  bool eof_ = false;
};

/// Serves one session over already-open descriptors (stdio mode).
void serve_stream(const Scenario& scenario, int in_fd, int out_fd);

/// Listens on host:port (port 0 picks a free one) and serves each connection
/// on its own thread. Returns after `max_sessions` sessions have ended, or
/// never when unset. `on_listening` receives the bound port.
void serve_tcp(const Scenario& scenario, const std::string& host, std::uint16_t port,
               std::optional<std::size_t> max_sessions,
               const std::function<void(std::uint16_t)>& on_listening = {});

/// Blocking request/response client, used by tests and scripted agents.
class BridgeClient {
 public:
  static BridgeClient connect(const std::string& host, std::uint16_t port);

  /// Sends one line and waits for the single response line.
  std::string request(const std::string& line);

 private:
  explicit BridgeClient(Fd fd);
  Fd fd_;
  LineChannel channel_;
};

}  // namespace mmroute::bridge
