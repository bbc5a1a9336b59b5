#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "swarm/distribution.hpp"
#include "swarm/flocking.hpp"
#include "swarm/geometry.hpp"
#include "swarm/sdf.hpp"

namespace swarm::sim {

struct DroneState {
  int id = 0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 commanded = Vec3::Zero();
  Vec3 integral = Vec3::Zero();    // integral of velocity error, m
  Vec3 prev_error = Vec3::Zero();  // m/s
};

struct WorldState {
  std::vector<DroneState> drones;
  PointCloud targets;
  flock::Assignment assignment;
  std::uint64_t tick = 0;
  double time = 0.0;  // always tick * dt
};

struct SimParams {
  double dt = 0.02;
  double kp = 4.0;
  double ki = 0.5;
  double kd = 0.05;
  double max_accel = 4.0;      // m/s^2
  double integral_limit = 2.0; // m, per axis
  Aabb bounds = Aabb::infinite();

  void validate() const;
};

// One PID + semi-implicit Euler tick. Throws CommandCountMismatch.
WorldState step(const WorldState& world, const std::vector<flock::VelocityCommand>& commands,
                const SimParams& params);

struct SwarmMetrics {
  double mean_sdf = 0.0;          // mean |f(p)|
  double mean_goal_distance = 0.0;
  double min_pairwise = 0.0;      // +inf with fewer than two drones
  double max_speed = 0.0;
};

SwarmMetrics metrics(const WorldState& world, const sdf::Shape& shape);

// Drones spread uniformly in `bounds`, ids 0..n-1, at rest.
std::vector<DroneState> spawn_drones(std::size_t n, const Aabb& bounds, std::uint64_t seed);

// Owns a world and drives it: command_velocities -> step on every tick.
class Swarm {
 public:
  Swarm(std::vector<DroneState> drones, SimParams params, flock::FlockingGains gains,
        flock::Strategy strategy = flock::Strategy::kGreedySequential);

  // Replaces the target set and reassigns; drones keep their PID state.
  void retarget(PointCloud targets);
  void tick();

  const WorldState& world() const { return world_; }
  const SimParams& params() const { return params_; }
  const flock::FlockingGains& gains() const { return gains_; }

 private:
  WorldState world_;
  SimParams params_;
  flock::FlockingGains gains_;
  flock::Strategy strategy_;
};

struct MetricsSample {
  double time = 0.0;
  SwarmMetrics metrics;
};

struct ScenarioOptions {
  std::uint64_t seed = 0;
  SimParams params;  // infinite bounds -> scene sampling bounds padded by 1 m
  flock::FlockingGains gains;
  flock::Strategy strategy = flock::Strategy::kGreedySequential;
  dist::PipelineOptions pipeline;  // its seed is overridden by `seed`
  double metrics_interval = 0.5;   // s
  int trajectory_stride = 5;       // ticks between trajectory rows
  std::ostream* trajectory = nullptr;
};

struct ScenarioResult {
  std::vector<MetricsSample> samples;
  WorldState final_state;
  PointCloud targets;
};

ScenarioResult run_scenario(const sdf::Shape& shape, std::size_t n_drones, double duration,
                            const ScenarioOptions& options = {});

// Header "t,id,x,y,z,vx,vy,vz".
void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, const WorldState& world);

}  // namespace swarm::sim
