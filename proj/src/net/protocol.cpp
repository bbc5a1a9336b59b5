#include "swarm/protocol.hpp"

#include <cmath>

#include <json.hpp>

#include "swarm/errors.hpp"

namespace swarm::net {
namespace {

using nlohmann::json;

// Model output and echoed input are not guaranteed to be valid UTF-8.
std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json maybe(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ProtocolError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string text_field(const json& j) {
  const json& t = field(j, "text");
  if (!t.is_string()) throw ProtocolError("\"text\" must be a string");
  return t.get<std::string>();
}

}  // namespace

ClientFrame parse_client_frame(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("frame must be a JSON object");
  const json& type = field(j, "type");
  if (!type.is_string()) throw ProtocolError("\"type\" must be a string");
  const std::string t = type.get<std::string>();

  if (t == "command") return CommandFrame{text_field(j)};
  if (t == "refine") return RefineFrame{text_field(j)};
  if (t == "dsl") return DslFrame{text_field(j)};
  if (t == "set") {
    const json& key = field(j, "key");
    if (!key.is_string() || key.get<std::string>() != "sky_text")
      throw ProtocolError("unknown setting " + key.dump());
    const json& value = field(j, "value");
    if (!value.is_boolean()) throw ProtocolError("\"value\" must be a boolean");
    return SetSkyTextFrame{value.get<bool>()};
  }
  throw ProtocolError("unknown frame type \"" + t + "\"");
}

std::string encode_client_frame(const ClientFrame& frame) {
  json j;
  if (const auto* c = std::get_if<CommandFrame>(&frame)) {
    j = {{"type", "command"}, {"text", c->text}};
  } else if (const auto* r = std::get_if<RefineFrame>(&frame)) {
    j = {{"type", "refine"}, {"text", r->text}};
  } else if (const auto* s = std::get_if<SetSkyTextFrame>(&frame)) {
    j = {{"type", "set"}, {"key", "sky_text"}, {"value", s->value}};
  } else {
    j = {{"type", "dsl"}, {"text", std::get<DslFrame>(frame).text}};
  }
  return j.dump();
}

StateMetrics state_metrics(const sim::WorldState& world, const sim::SwarmMetrics& metrics,
                           bool has_scene) {
  StateMetrics out;
  if (has_scene) out.mean_sdf = metrics.mean_sdf;
  out.min_pair = metrics.min_pairwise;
  if (!world.targets.empty()) out.mean_goal = metrics.mean_goal_distance;
  return out;
}

std::string state_frame(const sim::WorldState& world, const StateMetrics& metrics) {
  json drones = json::array();
  for (const sim::DroneState& d : world.drones)
    drones.push_back({{"id", d.id}, {"p", vec(d.position)}, {"v", vec(d.velocity)}});
  json targets = json::array();
  for (const Vec3& t : world.targets) targets.push_back(vec(t));
  const json j = {
      {"type", "state"},
      {"t", world.time},
      {"drones", std::move(drones)},
      {"targets", std::move(targets)},
      {"metrics",
       {{"mean_sdf", maybe(metrics.mean_sdf)},
        {"min_pair", maybe(metrics.min_pair)},
        {"mean_goal", maybe(metrics.mean_goal)}}},
  };
  return j.dump();
}

std::string reply_frame(std::string_view text) {
  return dump({{"type", "reply"}, {"text", std::string(text)}});
}

std::string error_frame(std::string_view code, std::string_view detail) {
  return dump({{"type", "error"}, {"code", std::string(code)}, {"detail", std::string(detail)}});
}

}  // namespace swarm::net
