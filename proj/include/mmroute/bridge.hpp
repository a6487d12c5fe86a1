#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mmroute/config.hpp"
#include "mmroute/environment.hpp"

namespace mmroute::bridge {

inline constexpr int kProtocolVersion = 1;

enum class MessageKind { hello, spec, reset, reset_custom, step, observation, result, error, close };

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> parse_kind(std::string_view name);

/// One protocol line: {"kind": ..., "id": ..., "payload": {...}}.
struct BridgeMessage {
  MessageKind kind = MessageKind::hello;
  nlohmann::json id;  // echoed verbatim in the response; null when absent
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const BridgeMessage&, const BridgeMessage&) = default;
};

/// Wire error codes.
inline constexpr std::string_view kMalformed = "MALFORMED";
inline constexpr std::string_view kBadAction = "BAD_ACTION";
inline constexpr std::string_view kLifecycle = "LIFECYCLE";
inline constexpr std::string_view kNotFound = "NOT_FOUND";
inline constexpr std::string_view kUnsupported = "UNSUPPORTED";

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string_view code, const std::string& message, nlohmann::json id = nullptr)
      : std::runtime_error(message), code_(code), id_(std::move(id)) {}
  const std::string& code() const { return code_; }
  const nlohmann::json& id() const { return id_; }

 private:
  std::string code_;
  nlohmann::json id_;
};

/// Compact single-line JSON, no trailing newline.
std::string serialize(const BridgeMessage& message);
/// Throws ProtocolError(MALFORMED) on anything that is not a well-formed message.
BridgeMessage parse_message(std::string_view line);

BridgeMessage make_error(const nlohmann::json& id, std::string_view code, const std::string& text);

/// One client session bound to one environment.
class BridgeSession {
 public:
  explicit BridgeSession(const Scenario& scenario);

  /// Handles a request and returns exactly one response.
  BridgeMessage handle(const BridgeMessage& request);
  /// Line-level wrapper: parse errors become MALFORMED responses.
  std::string handle_line(std::string_view line);

  bool closed() const { return closed_; }
  const Environment& environment() const { return env_; }

 private:
  BridgeMessage dispatch(const BridgeMessage& request);
  nlohmann::json spec_payload() const;

  Environment env_;
  bool closed_ = false;
};

}  // namespace mmroute::bridge
