#include "mmroute/transport.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <thread>
#include <vector>

#include "mmroute/bridge.hpp"
#include "mmroute/error.hpp"

namespace mmroute::bridge {

namespace {

std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  require(::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1, ErrorCode::config,
          "invalid IPv4 address '" + host + "'");
  return addr;
}

void run_session(const Scenario& scenario, LineChannel& channel) {
  BridgeSession session(scenario);
  while (!session.closed()) {
    auto line = channel.read_line();
    if (!line) break;
    if (line->empty()) continue;
    channel.write_line(session.handle_line(*line));
  }
}

}  // namespace

Fd& Fd::operator=(Fd&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

Fd::~Fd() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<std::string> LineChannel::read_line() {
  for (;;) {
    if (auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (eof_) {
      if (pending_.empty()) return std::nullopt;
      return std::exchange(pending_, {});
    }
    char chunk[4096];
    const ssize_t n = ::read(in_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::io, errno_text("read"));
    }
    if (n == 0) eof_ = true;
    else pending_.append(chunk, static_cast<std::size_t>(n));
  }
}

void LineChannel::write_line(const std::string& line) {
  std::string data = line + '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(out_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::io, errno_text("write"));
    }
    off += static_cast<std::size_t>(n);
  }
}

void serve_stream(const Scenario& scenario, int in_fd, int out_fd) {
  LineChannel channel(in_fd, out_fd);
  run_session(scenario, channel);
}

void serve_tcp(const Scenario& scenario, const std::string& host, std::uint16_t port,
               std::optional<std::size_t> max_sessions,
               const std::function<void(std::uint16_t)>& on_listening) {
  std::signal(SIGPIPE, SIG_IGN);
  Fd listener(::socket(AF_INET, SOCK_STREAM, 0));
  require(bool(listener), ErrorCode::io, errno_text("socket"));
  const int one = 1;
  ::setsockopt(listener.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = make_address(host, port);
  require(::bind(listener.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0,
          ErrorCode::io, errno_text("bind"));
  require(::listen(listener.get(), 16) == 0, ErrorCode::io, errno_text("listen"));
  socklen_t len = sizeof addr;
  ::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));

  std::vector<std::jthread> sessions;
  for (std::size_t accepted = 0; !max_sessions || accepted < *max_sessions; ++accepted) {
    Fd conn(::accept(listener.get(), nullptr, nullptr));
    if (!conn) {
      if (errno == EINTR) {
        --accepted;
        continue;
      }
      fail(ErrorCode::io, errno_text("accept"));
    }
    sessions.emplace_back([&scenario, c = std::move(conn)]() {
      try {
        LineChannel channel(c.get(), c.get());
        run_session(scenario, channel);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "bridge session ended: %s\n", e.what());
      }
    });
  }
}

BridgeClient::BridgeClient(Fd fd) : fd_(std::move(fd)), channel_(fd_.get(), fd_.get()) {}

BridgeClient BridgeClient::connect(const std::string& host, std::uint16_t port) {
  std::signal(SIGPIPE, SIG_IGN);
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  require(bool(fd), ErrorCode::io, errno_text("socket"));
  sockaddr_in addr = make_address(host, port);
  require(::connect(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0, ErrorCode::io,
          errno_text("connect"));
  return BridgeClient(std::move(fd));
}

std::string BridgeClient::request(const std::string& line) {
  channel_.write_line(line);
  auto response = channel_.read_line();
  require(response.has_value(), ErrorCode::io, "bridge closed the connection");
  return *response;
}

}  // namespace mmroute::bridge
