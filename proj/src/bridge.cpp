#include "mmroute/bridge.hpp"

#include <cstdint>
#include <array>
#include <cmath>

#include "mmroute/error.hpp"

namespace mmroute::bridge {

using nlohmann::json;

namespace {

constexpr std::array kKinds{
    std::pair{MessageKind::hello, std::string_view("hello")},
    std::pair{MessageKind::spec, std::string_view("spec")},
    std::pair{MessageKind::reset, std::string_view("reset")},
    std::pair{MessageKind::reset_custom, std::string_view("reset_custom")},
    std::pair{MessageKind::step, std::string_view("step")},
    std::pair{MessageKind::observation, std::string_view("observation")},
    std::pair{MessageKind::result, std::string_view("result")},
    std::pair{MessageKind::error, std::string_view("error")},
    std::pair{MessageKind::close, std::string_view("close")},
};

json info_payload(const StepInfo& info) {
  return {{"delivered", info.delivered_total},
          {"dropped", info.dropped_total},
          {"delivered_step", info.delivered},
          {"dropped_step", info.dropped},
          {"step_count", info.step_count},
          {"remaining", info.remaining},
          {"buffered", info.buffered},
          {"truncated", info.truncated}};
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<MessageKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string serialize(const BridgeMessage& message) {
  json j = {{"kind", std::string(to_string(message.kind))},
            {"id", message.id},
            {"payload", message.payload}};
  return j.dump();
}

BridgeMessage parse_message(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(kMalformed, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError(kMalformed, "message must be a JSON object");
  json id = j.contains("id") ? j.at("id") : json(nullptr);
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ProtocolError(kMalformed, "message needs a string 'kind'", id);
  }
  auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw ProtocolError(kMalformed, "unknown kind '" + j.at("kind").get<std::string>() + "'", id);
  BridgeMessage m;
  m.kind = *kind;
  m.id = std::move(id);
  if (j.contains("payload")) {
    if (!j.at("payload").is_object()) throw ProtocolError(kMalformed, "payload must be an object", m.id);
    m.payload = j.at("payload");
  }
  return m;
}

BridgeMessage make_error(const json& id, std::string_view code, const std::string& text) {
  return {MessageKind::error, id, {{"code", std::string(code)}, {"message", text}}};
}

BridgeSession::BridgeSession(const Scenario& scenario) : env_(scenario.make_environment()) {}

json BridgeSession::spec_payload() const {
  const Topology& t = env_.topology();
  const PowerLadder& ladder = env_.config().ladder;
  json levels = json::array();
  for (std::size_t i = 0; i < ladder.size(); ++i) levels.push_back(ladder.normalized(i));
  json links = json::array();
  for (const Link& l : t.links()) {
    links.push_back({{"id", l.id.value},
                     {"src", t.station(l.src).name},
                     {"dst", t.station(l.dst).name}});
  }
  return {{"protocol_version", kProtocolVersion},
          {"observation_length", env_.observation_size()},
          {"action_length", t.link_count()},
          {"power_ladder", ladder.levels()},
          {"action_levels", levels},
          {"eval_list_size", env_.eval_list_size()},
          {"links", links}};
}

BridgeMessage BridgeSession::handle(const BridgeMessage& request) {
  if (closed_) return make_error(request.id, kLifecycle, "session is closed");
  try {
    return dispatch(request);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::malformed_action: return make_error(request.id, kBadAction, e.what());
      case ErrorCode::lifecycle: return make_error(request.id, kLifecycle, e.what());
      case ErrorCode::not_found: return make_error(request.id, kNotFound, e.what());
      default: return make_error(request.id, kMalformed, e.what());
    }
  } catch (const json::exception& e) {
    return make_error(request.id, kMalformed, e.what());
  }
}

BridgeMessage BridgeSession::dispatch(const BridgeMessage& request) {
  const json& p = request.payload;
  switch (request.kind) {
    case MessageKind::hello: {
      if (p.contains("protocol_version") && p.at("protocol_version") != kProtocolVersion) {
        return make_error(request.id, kUnsupported, "unsupported protocol_version");
      }
      return {MessageKind::spec, request.id, spec_payload()};
    }
    case MessageKind::reset:
    case MessageKind::reset_custom: {
      Observation obs;
      if (request.kind == MessageKind::reset) {
        obs = env_.reset();
      } else {
        if (!p.contains("episode_index") || !p.at("episode_index").is_number_integer() ||
            p.at("episode_index").get<std::int64_t>() < 0) {
          return make_error(request.id, kMalformed, "reset_custom needs a non-negative integer episode_index");
        }
        obs = env_.reset_custom(p.at("episode_index").get<std::size_t>());
      }
      return {MessageKind::observation, request.id,
              {{"observation", obs},
               {"done", env_.done()},
               {"total_packets", env_.total_packets()}}};
    }
    case MessageKind::step: {
      if (!p.contains("action") || !p.at("action").is_array()) {
        return make_error(request.id, kBadAction, "step needs an 'action' array");
      }
      std::vector<double> action;
      for (const json& v : p.at("action")) {
        if (!v.is_number()) return make_error(request.id, kBadAction, "action entries must be numbers");
        action.push_back(v.get<double>());
      }
      if (!env_.started() || env_.done()) {
        return make_error(request.id, kLifecycle,
                          env_.started() ? "episode is done; reset first" : "reset before step");
      }
      StepResult r = env_.step_actions(action);
      return {MessageKind::result, request.id,
              {{"observation", r.observation},
               {"reward", r.reward},
               {"done", r.done},
               {"info", info_payload(r.info)}}};
    }
    case MessageKind::close:
      closed_ = true;
      return {MessageKind::close, request.id, json::object()};
    case MessageKind::spec:
    case MessageKind::observation:
    case MessageKind::result:
    case MessageKind::error:
      break;
  }
  return make_error(request.id, kUnsupported,
                    "'" + std::string(to_string(request.kind)) + "' is a response kind");
}

std::string BridgeSession::handle_line(std::string_view line) {
  try {
    return serialize(handle(parse_message(line)));
  } catch (const ProtocolError& e) {
    return serialize(make_error(e.id(), e.code(), e.what()));
  }
}

}  // namespace mmroute::bridge
