// swarmctl: serve the websocket endpoint, or run the pipeline headless.
//
//   swarmctl serve --port 8765 --drones 64 --provider mock --seed 0
//   swarmctl run --scene pawn.dsl --drones 64 --duration 60 --out traj.csv
//   swarmctl points --scene pawn.dsl --n 64 --out points.csv

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "swarm/distribution.hpp"
#include "swarm/dsl.hpp"
#include "swarm/errors.hpp"
#include "swarm/remote_provider.hpp"
#include "swarm/server.hpp"
#include "swarm/simulator.hpp"

namespace {

using namespace swarm;

sdf::Shape load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return dsl::parse(dsl::SceneSource{text.str(), dsl::Origin::kUserDirect});
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

int serve(const std::string& address, std::uint16_t port, std::size_t drones,
          const std::string& provider, std::uint64_t seed) {
  net::ServerConfig config;
  config.address = address;
  config.port = port;
  config.drones = drones;
  config.seed = seed;
  if (provider == "remote") {
    // Fails here, before binding, when the key is missing.
    const net::RemoteConfig remote = net::RemoteConfig::from_env();
    config.provider = [remote] { return std::make_shared<net::RemoteProvider>(remote); };
  }

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  net::Server server(config);
  const std::uint16_t bound = server.start();
  std::cout << "listening on ws://" << address << ":" << bound << " (" << drones
            << " drones per session, " << provider << " provider)" << std::endl;
  int sig = 0;
  sigwait(&stop_signals, &sig);
  std::cout << "stopping" << std::endl;
  server.stop();
  return 0;
}

int run(const std::string& scene, std::size_t drones, double duration, const std::string& out,
        std::uint64_t seed) {
  const sdf::Shape shape = load_scene(scene);
  std::ofstream file = open_out(out);
  sim::ScenarioOptions options;
  options.seed = seed;
  options.trajectory = &file;
  const sim::ScenarioResult r = sim::run_scenario(shape, drones, duration, options);
  const sim::SwarmMetrics& m = r.samples.back().metrics;
  std::cout << "t=" << r.samples.back().time << " mean_sdf=" << m.mean_sdf
            << " mean_goal=" << m.mean_goal_distance << " min_pair=" << m.min_pairwise
            << " max_speed=" << m.max_speed << "\n";
  return 0;
}

int points(const std::string& scene, std::size_t n, const std::string& out, std::uint64_t seed) {
  const sdf::Shape shape = load_scene(scene);
  dist::PipelineOptions options;
  options.seed = seed;
  const PointCloud cloud = dist::generate_targets(shape, n, options);
  std::ofstream file = open_out(out);
  dist::write_points_csv(file, cloud);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Language-driven drone swarm shapes"};
  app.require_subcommand(1);

  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;
  std::size_t drones = 64;
  std::string provider = "mock";
  std::uint64_t seed = 0;
  std::string scene, out;
  double duration = 60.0;
  std::size_t n = 64;

  auto* serve_cmd = app.add_subcommand("serve", "Run the websocket endpoint");
  serve_cmd->add_option("--address", address, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", port, "Port, 0 picks a free one")->capture_default_str();
  serve_cmd->add_option("--drones", drones, "Drones per session")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--provider", provider, "Language model backend")
      ->check(CLI::IsMember({"mock", "remote"}))
      ->capture_default_str();
  serve_cmd->add_option("--seed", seed, "Seed for spawning and sampling")->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "Simulate a scene headless and record trajectories");
  run_cmd->add_option("--scene", scene, "Scene file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--drones", drones, "Swarm size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--duration", duration, "Simulated seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--out", out, "Trajectory CSV")->required();
  run_cmd->add_option("--seed", seed, "Seed for spawning and sampling")->capture_default_str();

  auto* points_cmd = app.add_subcommand("points", "Write the target points for a scene");
  points_cmd->add_option("--scene", scene, "Scene file")->required()->check(CLI::ExistingFile);
  points_cmd->add_option("--n", n, "Number of points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  points_cmd->add_option("--out", out, "Points CSV")->required();
  points_cmd->add_option("--seed", seed, "Seed for sampling")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(address, port, drones, provider, seed);
    if (*run_cmd) return run(scene, drones, duration, out, seed);
    return points(scene, n, out, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
