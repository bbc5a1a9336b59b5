#include <cmath>
#include <limits>

#include <gtest/gtest.h>
#include <json.hpp>

#include "swarm/errors.hpp"
#include "swarm/protocol.hpp"

namespace swarm::net {
namespace {

using nlohmann::json;

TEST(ClientFrames, ParseEveryType) {
  EXPECT_EQ(std::get<CommandFrame>(parse_client_frame(R"({"type":"command","text":"a ball"})")).text,
            "a ball");
  EXPECT_EQ(std::get<RefineFrame>(parse_client_frame(R"({"type":"refine","text":"bigger"})")).text,
            "bigger");
  EXPECT_TRUE(std::get<SetSkyTextFrame>(
                  parse_client_frame(R"({"type":"set","key":"sky_text","value":true})"))
                  .value);
  EXPECT_EQ(
      std::get<DslFrame>(parse_client_frame(R"j({"type":"dsl","text":"(sphere :r 1)"})j")).text,
      "(sphere :r 1)");
}

TEST(ClientFrames, RoundTrip) {
  const ClientFrame frames[] = {CommandFrame{"make a \"cube\"\n"}, RefineFrame{"x"},
                                SetSkyTextFrame{false}, DslFrame{"(box :size (1 1 1))"}};
  for (const ClientFrame& f : frames) {
    const ClientFrame back = parse_client_frame(encode_client_frame(f));
    EXPECT_EQ(back.index(), f.index());
    EXPECT_EQ(encode_client_frame(back), encode_client_frame(f));
  }
}

TEST(ClientFrames, MalformedFramesAreRejected) {
  const char* bad[] = {
      "",
      "not json",
      "[1,2]",
      R"({"text":"no type"})",
      R"({"type":7})",
      R"({"type":"launch"})",
      R"({"type":"command"})",
      R"({"type":"command","text":5})",
      R"({"type":"set","key":"volume","value":true})",
      R"({"type":"set","key":"sky_text","value":"yes"})",
      R"({"type":"set","key":"sky_text"})",
  };
  for (const char* b : bad) EXPECT_THROW(parse_client_frame(b), ProtocolError) << b;
}

TEST(ServerFrames, StateLayout) {
  sim::WorldState w;
  w.time = 1.5;
  w.drones = {{0, {1, 2, 3}, {0.5, 0, 0}}, {1, {0, 0, 0}, {0, 0, 0}}};
  w.targets = {{1, 0, 0}, {0, 1, 0}};
  StateMetrics m{0.25, 2.0, 0.125};
  const json j = json::parse(state_frame(w, m));
  EXPECT_EQ(j["type"], "state");
  EXPECT_EQ(j["t"], 1.5);
  ASSERT_EQ(j["drones"].size(), 2u);
  EXPECT_EQ(j["drones"][0]["id"], 0);
  EXPECT_EQ(j["drones"][0]["p"], json::array({1.0, 2.0, 3.0}));
  EXPECT_EQ(j["drones"][0]["v"], json::array({0.5, 0.0, 0.0}));
  EXPECT_EQ(j["targets"][1], json::array({0.0, 1.0, 0.0}));
  EXPECT_EQ(j["metrics"]["mean_sdf"], 0.25);
  EXPECT_EQ(j["metrics"]["min_pair"], 2.0);
  EXPECT_EQ(j["metrics"]["mean_goal"], 0.125);
}

TEST(ServerFrames, UndefinedMetricsAreNull) {
  sim::WorldState w;
  w.drones = {{0, {0, 0, 0}}};
  sim::SwarmMetrics raw;
  raw.min_pairwise = std::numeric_limits<double>::infinity();
  const json j = json::parse(state_frame(w, state_metrics(w, raw, false)));
  EXPECT_TRUE(j["metrics"]["mean_sdf"].is_null());
  EXPECT_TRUE(j["metrics"]["min_pair"].is_null());
  EXPECT_TRUE(j["metrics"]["mean_goal"].is_null());
  EXPECT_TRUE(j["targets"].is_array());
  EXPECT_TRUE(j["targets"].empty());
}

TEST(ServerFrames, ReplyAndError) {
  EXPECT_EQ(json::parse(reply_frame("hi")), json({{"type", "reply"}, {"text", "hi"}}));
  EXPECT_EQ(json::parse(error_frame("parse_error", "1:3: expected number")),
            json({{"type", "error"}, {"code", "parse_error"}, {"detail", "1:3: expected number"}}));
  // Invalid UTF-8 from a model reply still yields a valid frame.
  EXPECT_NO_THROW(json::parse(reply_frame("bad \xff byte")));
}

}  // namespace
}  // namespace swarm::net
