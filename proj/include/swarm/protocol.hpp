#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "swarm/simulator.hpp"

// JSON frames exchanged with viewer clients, one object per message.
//
//   client -> server
//     {"type":"command","text":"make a sphere"}
//     {"type":"refine","text":"twice as big"}
//     {"type":"set","key":"sky_text","value":true}
//     {"type":"dsl","text":"(sphere :r 1)"}
//
//   server -> client
//     {"type":"state","t":1.2,"drones":[{"id":0,"p":[x,y,z],"v":[x,y,z]}],
//      "targets":[[x,y,z]],"metrics":{"mean_sdf":m,"min_pair":m,"mean_goal":m}}
//     {"type":"reply","text":"..."}
//     {"type":"error","code":"parse_error","detail":"..."}
//
// Metrics that are undefined (no scene, no targets, fewer than two drones)
// are sent as null.
namespace swarm::net {

struct CommandFrame {
  std::string text;
};
struct RefineFrame {
  std::string text;
};
struct SetSkyTextFrame {
  bool value = false;
};
struct DslFrame {
  std::string text;
};

using ClientFrame = std::variant<CommandFrame, RefineFrame, SetSkyTextFrame, DslFrame>;

// Throws ProtocolError.
ClientFrame parse_client_frame(std::string_view text);
std::string encode_client_frame(const ClientFrame& frame);

struct StateMetrics {
  std::optional<double> mean_sdf;
  std::optional<double> min_pair;
  std::optional<double> mean_goal;
};

// `metrics` is the full metric set; fields are dropped to null when the
// world has no scene (`has_scene`) or no targets.
StateMetrics state_metrics(const sim::WorldState& world, const sim::SwarmMetrics& metrics,
                           bool has_scene);

std::string state_frame(const sim::WorldState& world, const StateMetrics& metrics);
std::string reply_frame(std::string_view text);
std::string error_frame(std::string_view code, std::string_view detail);

}  // namespace swarm::net
