#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "swarm/flocking.hpp"
#include "swarm/orchestrator.hpp"
#include "swarm/simulator.hpp"

namespace swarm::net {

struct ServerConfig {
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  std::size_t drones = 64;
  std::uint64_t seed = 0;
  sim::SimParams params;  // dt sets the tick rate, 0.02 s is 50 Hz
  flock::FlockingGains gains;
  flock::Strategy strategy = flock::Strategy::kOptimalMatching;
  int ticks_per_state = 5;  // 10 Hz state frames at the default dt
  Aabb spawn_bounds{Vec3::Constant(-2.0), Vec3::Constant(2.0)};
  orch::SessionConfig session;  // drones and seed are taken from above
  // Called once per connection; every session gets its own provider.
  std::function<std::shared_ptr<orch::LlmProvider>()> provider =
      [] { return orch::MockProvider::with_defaults(); };
  int io_threads = 2;
  int worker_threads = 2;
};

// Websocket endpoint: one orchestrator session and one simulated swarm per
// connection, ticked on the connection's strand. Commands run on a worker
// pool and hand new targets back to the strand between ticks.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving in background threads. Returns the bound port.
  // Throws std::system_error when the port cannot be bound.
  std::uint16_t start();
  // Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

  std::size_t connections() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace swarm::net
