#include "swarm/flocking.hpp"

#include <limits>
#include <string>

#include "swarm/errors.hpp"

namespace swarm::flock {
namespace {

// Hungarian method with row/column potentials, O(n^2 m) for n rows <= m
// columns. Returns the column chosen by each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size(), m = cost[0].size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) minv[j] = cur, way[j] = j0;
        if (minv[j] < delta) delta = minv[j], j1 = j;
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= m; ++j)
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

void FlockingGains::validate() const {
  if (!(c_g > 0.0)) throw ValidationError("c_g must be positive");
  if (!(c_s > 0.0)) throw ValidationError("c_s must be positive");
  if (!(v_max > 0.0)) throw ValidationError("v_max must be positive");
  if (!(r_safe >= kDroneDiameter))
    throw ValidationError("r_safe must be at least the drone diameter");
}

Assignment assign_targets(const PointCloud& drones, const PointCloud& targets,
                          Strategy strategy) {
  if (drones.empty()) throw ValidationError("no drones to assign");
  if (targets.size() < drones.size())
    throw InsufficientTargets(std::to_string(targets.size()) + " targets for " +
                              std::to_string(drones.size()) + " drones");
  Assignment a;
  a.strategy = strategy;
  if (strategy == Strategy::kGreedySequential) {
    std::vector<bool> taken(targets.size(), false);
    for (const Vec3& p : drones) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < targets.size(); ++j) {
        if (taken[j]) continue;
        const double d = (targets[j] - p).squaredNorm();
        if (d < best_d) best_d = d, best = j;
      }
      taken[best] = true;
      a.target_of.push_back(best);
    }
    return a;
  }
  std::vector<std::vector<double>> cost(drones.size(), std::vector<double>(targets.size()));
  for (std::size_t i = 0; i < drones.size(); ++i)
    for (std::size_t j = 0; j < targets.size(); ++j)
      cost[i][j] = (targets[j] - drones[i]).squaredNorm();
  a.target_of = hungarian(cost);
  return a;
}

double total_squared_distance(const PointCloud& drones, const PointCloud& targets,
                              const Assignment& assignment) {
  double sum = 0.0;
  for (std::size_t i = 0; i < drones.size(); ++i)
    sum += (targets[assignment.target_of[i]] - drones[i]).squaredNorm();
  return sum;
}

Vec3 goal_velocity(const Vec3& position, const Vec3& goal, const FlockingGains& gains) {
  return gains.c_g * (goal - position);
}

Vec3 separation_velocity(std::size_t i, const PointCloud& positions, const FlockingGains& gains) {
  Vec3 sum = Vec3::Zero();
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (k == i) continue;
    const Vec3 d = positions[k] - positions[i];
    if (d.norm() < gains.r_safe) sum += d;
  }
  return -gains.c_s * sum;
}

std::vector<VelocityCommand> command_velocities(const PointCloud& positions,
                                                const Assignment& assignment,
                                                const PointCloud& targets,
                                                const FlockingGains& gains) {
  if (assignment.target_of.size() != positions.size())
    throw ValidationError("assignment does not cover every drone");
  std::vector<VelocityCommand> out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::size_t t = assignment.target_of[i];
    if (t >= targets.size()) throw ValidationError("assignment index out of range");
    VelocityCommand& c = out[i];
    c.v_g = goal_velocity(positions[i], targets[t], gains);
    c.v_s = separation_velocity(i, positions, gains);
    c.v = c.v_g + c.v_s;
    const double speed = c.v.norm();
    if (speed > gains.v_max) {
      c.v *= gains.v_max / speed;
      // Rescaling can land an ulp above v_max.
      while (c.v.norm() > gains.v_max) c.v *= 1.0 - std::numeric_limits<double>::epsilon();
    }
  }
  return out;
}

}  // namespace swarm::flock
