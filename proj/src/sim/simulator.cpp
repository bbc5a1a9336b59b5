#include "swarm/simulator.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "swarm/errors.hpp"

namespace swarm::sim {

void SimParams::validate() const {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (kp < 0.0 || ki < 0.0 || kd < 0.0) throw ValidationError("PID gains must be non-negative");
  if (!(max_accel > 0.0)) throw ValidationError("max_accel must be positive");
  if (!(integral_limit >= 0.0)) throw ValidationError("integral_limit must be non-negative");
}

WorldState step(const WorldState& world, const std::vector<flock::VelocityCommand>& commands,
                const SimParams& params) {
  if (commands.size() != world.drones.size())
    throw CommandCountMismatch(std::to_string(commands.size()) + " commands for " +
                               std::to_string(world.drones.size()) + " drones");
  WorldState next = world;
  const double dt = params.dt;
  const double lim = params.integral_limit;
  for (std::size_t i = 0; i < next.drones.size(); ++i) {
    DroneState& d = next.drones[i];
    d.commanded = commands[i].v;
    const Vec3 e = d.commanded - d.velocity;
    d.integral = (d.integral + e * dt).cwiseMax(-lim).cwiseMin(lim);
    const Vec3 de = (e - d.prev_error) / dt;
    Vec3 a = params.kp * e + params.ki * d.integral + params.kd * de;
    const double mag = a.norm();
    if (mag > params.max_accel) a *= params.max_accel / mag;
    d.velocity += a * dt;
    d.position = params.bounds.clamp(d.position + d.velocity * dt);
    d.prev_error = e;
  }
  ++next.tick;
  next.time = static_cast<double>(next.tick) * dt;
  return next;
}

SwarmMetrics metrics(const WorldState& world, const sdf::Shape& shape) {
  SwarmMetrics m;
  const std::size_t n = world.drones.size();
  m.min_pairwise = std::numeric_limits<double>::infinity();
  if (n == 0) return m;
  const bool assigned = world.assignment.target_of.size() == n;
  for (std::size_t i = 0; i < n; ++i) {
    const DroneState& d = world.drones[i];
    m.mean_sdf += std::abs(shape.eval(d.position));
    if (assigned)
      m.mean_goal_distance += (world.targets[world.assignment.target_of[i]] - d.position).norm();
    m.max_speed = std::max(m.max_speed, d.velocity.norm());
    for (std::size_t j = i + 1; j < n; ++j)
      m.min_pairwise = std::min(m.min_pairwise, (world.drones[j].position - d.position).norm());
  }
  m.mean_sdf /= static_cast<double>(n);
  m.mean_goal_distance /= static_cast<double>(n);
  return m;
}

std::vector<DroneState> spawn_drones(std::size_t n, const Aabb& bounds, std::uint64_t seed) {
  if (bounds.is_empty() || !bounds.is_bounded())
    throw ValidationError("spawn bounds must be finite and non-empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DroneState> drones(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    const double z = u(rng);
    drones[i].id = static_cast<int>(i);
    drones[i].position = bounds.min + bounds.extent().cwiseProduct(Vec3(x, y, z));
  }
  return drones;
}

Swarm::Swarm(std::vector<DroneState> drones, SimParams params, flock::FlockingGains gains,
             flock::Strategy strategy)
    : params_(params), gains_(gains), strategy_(strategy) {
  params_.validate();
  gains_.validate();
  world_.drones = std::move(drones);
}

void Swarm::retarget(PointCloud targets) {
  PointCloud positions;
  positions.reserve(world_.drones.size());
  for (const DroneState& d : world_.drones) positions.push_back(d.position);
  world_.assignment = flock::assign_targets(positions, targets, strategy_);
  world_.targets = std::move(targets);
}

void Swarm::tick() {
  std::vector<flock::VelocityCommand> commands(world_.drones.size());
  if (!world_.targets.empty()) {
    PointCloud positions;
    positions.reserve(world_.drones.size());
    for (const DroneState& d : world_.drones) positions.push_back(d.position);
    commands = flock::command_velocities(positions, world_.assignment, world_.targets, gains_);
  }
  world_ = step(world_, commands, params_);
}

ScenarioResult run_scenario(const sdf::Shape& shape, std::size_t n_drones, double duration,
                            const ScenarioOptions& options) {
  if (n_drones == 0) throw ValidationError("scenario needs at least one drone");
  SimParams params = options.params;
  params.validate();
  if (!params.bounds.is_bounded()) params.bounds = dist::sampling_bounds(shape).padded(1.0);

  dist::PipelineOptions pipeline = options.pipeline;
  pipeline.seed = options.seed;
  ScenarioResult result;
  result.targets = dist::generate_targets(shape, n_drones, pipeline);

  Swarm swarm(spawn_drones(n_drones, params.bounds, options.seed), params, options.gains,
              options.strategy);
  swarm.retarget(result.targets);

  const auto total = static_cast<std::uint64_t>(std::llround(duration / params.dt));
  const auto every = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(options.metrics_interval / params.dt)));
  const auto stride = static_cast<std::uint64_t>(std::max(1, options.trajectory_stride));
  if (options.trajectory) write_trajectory_header(*options.trajectory);

  for (std::uint64_t t = 0;; ++t) {
    const WorldState& w = swarm.world();
    if (t % every == 0) result.samples.push_back({w.time, metrics(w, shape)});
    if (options.trajectory && t % stride == 0) write_trajectory_rows(*options.trajectory, w);
    if (t == total) break;
    swarm.tick();
  }
  result.final_state = swarm.world();
  return result;
}

void write_trajectory_header(std::ostream& out) { out << "t,id,x,y,z,vx,vy,vz\n"; }

void write_trajectory_rows(std::ostream& out, const WorldState& world) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::defaultfloat << std::setprecision(9);
  for (const DroneState& d : world.drones) {
    out << world.time << ',' << d.id << ',' << d.position.x() << ',' << d.position.y() << ','
        << d.position.z() << ',' << d.velocity.x() << ',' << d.velocity.y() << ','
        << d.velocity.z() << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace swarm::sim
