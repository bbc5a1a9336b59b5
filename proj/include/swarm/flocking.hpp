#pragma once

#include <vector>

#include "swarm/geometry.hpp"

namespace swarm::flock {

// Crazyflie-class frame, motor to motor.
inline constexpr double kDroneDiameter = 0.1;

struct FlockingGains {
  double c_g = 0.8;     // 1/s
  double c_s = 2.0;     // 1/s
  double r_safe = 0.35; // m
  double v_max = 1.0;   // m/s

  // Throws ValidationError.
  void validate() const;
};

enum class Strategy { kGreedySequential, kOptimalMatching };

struct Assignment {
  std::vector<std::size_t> target_of;  // indexed by drone
  Strategy strategy = Strategy::kGreedySequential;
};

// Greedy: drones in index order take the nearest unclaimed target, ties to
// the lower target index. Optimal: minimum total squared distance.
// Throws InsufficientTargets.
Assignment assign_targets(const PointCloud& drones, const PointCloud& targets,
                          Strategy strategy = Strategy::kGreedySequential);

double total_squared_distance(const PointCloud& drones, const PointCloud& targets,
                              const Assignment& assignment);

Vec3 goal_velocity(const Vec3& position, const Vec3& goal, const FlockingGains& gains);

// -c_s * sum of (p_k - p_i) over neighbors closer than r_safe.
Vec3 separation_velocity(std::size_t i, const PointCloud& positions, const FlockingGains& gains);

struct VelocityCommand {
  Vec3 v = Vec3::Zero();    // clamped to v_max
  Vec3 v_g = Vec3::Zero();  // pre-clamp components
  Vec3 v_s = Vec3::Zero();
};

std::vector<VelocityCommand> command_velocities(const PointCloud& positions,
                                                const Assignment& assignment,
                                                const PointCloud& targets,
                                                const FlockingGains& gains);

}  // namespace swarm::flock
