#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "swarm/errors.hpp"
#include "swarm/flocking.hpp"

namespace swarm::flock {
namespace {

using swarm::testing::brute_force_matching;
using swarm::testing::random_cloud;

FlockingGains gains(double c_g, double c_s, double r_safe, double v_max) {
  FlockingGains g;
  g.c_g = c_g;
  g.c_s = c_s;
  g.r_safe = r_safe;
  g.v_max = v_max;
  return g;
}

TEST(Assign, GreedyExample) {
  const PointCloud drones = {{0, 0, 0}, {10, 0, 0}};
  const PointCloud targets = {{9, 0, 0}, {1, 0, 0}};
  const Assignment a = assign_targets(drones, targets, Strategy::kGreedySequential);
  EXPECT_EQ(a.target_of, (std::vector<std::size_t>{1, 0}));
  const Assignment b = assign_targets(drones, targets, Strategy::kOptimalMatching);
  EXPECT_EQ(b.target_of, a.target_of);
  EXPECT_EQ(b.strategy, Strategy::kOptimalMatching);
  double total = 0.0;
  for (std::size_t i = 0; i < 2; ++i) total += (targets[b.target_of[i]] - drones[i]).norm();
  EXPECT_EQ(total, 2.0);
}

TEST(Assign, SingleDrone) {
  for (auto s : {Strategy::kGreedySequential, Strategy::kOptimalMatching})
    EXPECT_EQ(assign_targets({{1, 2, 3}}, {{4, 5, 6}}, s).target_of,
              (std::vector<std::size_t>{0}));
}

TEST(Assign, GreedyTieGoesToLowerIndex) {
  const PointCloud targets = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}};
  EXPECT_EQ(assign_targets({{0, 0, 0}}, targets).target_of[0], 0u);
}

TEST(Assign, GreedyIsNotOptimalInGeneral) {
  // Drone 0 grabs the shared nearest target and forces drone 1 far away.
  const PointCloud drones = {{0, 0, 0}, {1.1, 0, 0}};
  const PointCloud targets = {{1, 0, 0}, {-2, 0, 0}};
  const Assignment g = assign_targets(drones, targets, Strategy::kGreedySequential);
  const Assignment o = assign_targets(drones, targets, Strategy::kOptimalMatching);
  EXPECT_GT(total_squared_distance(drones, targets, g),
            total_squared_distance(drones, targets, o));
}

TEST(Assign, InsufficientTargets) {
  EXPECT_THROW(assign_targets({{0, 0, 0}, {1, 1, 1}}, {{0, 0, 0}}), InsufficientTargets);
}

TEST(AssignProperties, InjectiveAndDeterministic) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const PointCloud d = random_cloud(20, rng), g = random_cloud(25, rng);
    for (auto s : {Strategy::kGreedySequential, Strategy::kOptimalMatching}) {
      const Assignment a = assign_targets(d, g, s);
      EXPECT_EQ(std::set<std::size_t>(a.target_of.begin(), a.target_of.end()).size(), 20u);
      EXPECT_EQ(assign_targets(d, g, s).target_of, a.target_of);
    }
  }
}

TEST(AssignProperties, OptimalMatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> size(1, 6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = size(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(n, 6)(rng);
    const PointCloud d = random_cloud(n, rng), g = random_cloud(m, rng);
    const Assignment a = assign_targets(d, g, Strategy::kOptimalMatching);
    EXPECT_NEAR(total_squared_distance(d, g, a), brute_force_matching(d, g), 1e-9)
        << "n=" << n << " m=" << m;
    EXPECT_LE(total_squared_distance(d, g, a),
              total_squared_distance(d, g, assign_targets(d, g)) + 1e-12);
  }
}

TEST(GoalVelocity, Examples) {
  EXPECT_EQ(goal_velocity({0, 0, 0}, {1, 0, 0}, gains(1, 1, 1, 1)), Vec3(1, 0, 0));
  EXPECT_EQ(goal_velocity({2, 3, 4}, {2, 3, 4}, gains(1, 1, 1, 1)), Vec3::Zero());
  EXPECT_EQ(goal_velocity({0, 0, 0}, {2, 0, 0}, gains(0.5, 1, 1, 1)), Vec3(1, 0, 0));
}

TEST(SeparationVelocity, Examples) {
  const auto g = gains(1, 1, 1, 1);
  EXPECT_EQ(separation_velocity(0, {{0, 0, 0}, {0.5, 0, 0}}, g), Vec3(-0.5, 0, 0));
  EXPECT_EQ(separation_velocity(0, {{0, 0, 0}, {5, 0, 0}}, g), Vec3::Zero());
  EXPECT_EQ(separation_velocity(0, {{0, 0, 0}, {0.3, 0, 0}, {-0.3, 0, 0}}, g), Vec3::Zero());
}

TEST(SeparationVelocity, OnlyNeighborsInsideRadiusCount) {
  const auto g = gains(1, 2, 1, 1);
  const PointCloud p = {{0, 0, 0}, {0.5, 0, 0}, {0, 0.99, 0}, {0, 0, 1.0}, {3, 3, 3}};
  EXPECT_EQ(separation_velocity(0, p, g), -2.0 * Vec3(0.5, 0.99, 0));
}

TEST(CommandVelocities, Examples) {
  const Assignment a{{0}, Strategy::kGreedySequential};
  auto c = command_velocities({{0, 0, 0}}, a, {{1, 0, 0}}, gains(1, 1, 1, 2));
  EXPECT_EQ(c[0].v, Vec3(1, 0, 0));
  c = command_velocities({{0, 0, 0}}, a, {{10, 0, 0}}, gains(1, 1, 1, 2));
  EXPECT_DOUBLE_EQ(c[0].v.norm(), 2.0);
  EXPECT_EQ(c[0].v.normalized(), Vec3(1, 0, 0));
  EXPECT_EQ(c[0].v_g, Vec3(10, 0, 0));
}

TEST(CommandVelocities, TwoDronesSharingATargetRepel) {
  // Drones at (0,0,0) and (0.2,0,0), both sent to (0.1,1,0); r_safe 0.35.
  const PointCloud p = {{0, 0, 0}, {0.2, 0, 0}};
  const PointCloud t = {{0.1, 1, 0}};
  const Assignment a{{0, 0}, Strategy::kGreedySequential};
  const auto g = gains(0.8, 2.0, 0.35, 10.0);
  const auto c = command_velocities(p, a, t, g);
  // v0 = 0.8 (0.1, 1, 0) - 2 (0.2, 0, 0) = (-0.32, 0.8, 0)
  // v1 = 0.8 (-0.1, 1, 0) - 2 (-0.2, 0, 0) = (0.32, 0.8, 0)
  EXPECT_NEAR((c[0].v - Vec3(-0.32, 0.8, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((c[1].v - Vec3(0.32, 0.8, 0)).norm(), 0.0, 1e-15);
  EXPECT_NE(c[0].v, c[0].v_g);
}

TEST(CommandVelocities, RejectsInconsistentAssignment) {
  EXPECT_THROW(command_velocities({{0, 0, 0}}, {{3}, Strategy::kGreedySequential}, {{1, 0, 0}},
                                  FlockingGains{}),
               ValidationError);
  EXPECT_THROW(command_velocities({{0, 0, 0}, {1, 0, 0}}, {{0}, Strategy::kGreedySequential},
                                  {{1, 0, 0}}, FlockingGains{}),
               ValidationError);
}

TEST(CommandProperties, AdditivityClampEquilibriumSymmetry) {
  std::mt19937_64 rng(3);
  const FlockingGains g;
  for (int t = 0; t < 200; ++t) {
    const PointCloud p = random_cloud(12, rng, 0.6), targets = random_cloud(12, rng, 2.0);
    const Assignment a = assign_targets(p, targets);
    const auto c = command_velocities(p, a, targets, g);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(c[i].v_g, goal_velocity(p[i], targets[a.target_of[i]], g));
      EXPECT_EQ(c[i].v_s, separation_velocity(i, p, g));
      EXPECT_LE(c[i].v.norm(), g.v_max);
      const Vec3 raw = c[i].v_g + c[i].v_s;
      if (raw.norm() <= g.v_max) {
        EXPECT_EQ(c[i].v, raw);
      } else {
        EXPECT_NEAR((c[i].v.normalized() - raw.normalized()).norm(), 0.0, 1e-12);
      }
    }
  }
  // At the goal with nobody nearby.
  const auto c = command_velocities({{0, 0, 0}, {5, 0, 0}}, {{0, 1}, Strategy::kGreedySequential},
                                    {{0, 0, 0}, {5, 0, 0}}, g);
  EXPECT_EQ(c[0].v, Vec3::Zero());
  EXPECT_EQ(c[1].v, Vec3::Zero());
  // Isolated pair: equal and opposite separation.
  const PointCloud pair = {{0.1, 0.2, 0.3}, {0.25, 0.1, 0.2}};
  EXPECT_EQ(separation_velocity(0, pair, g), -separation_velocity(1, pair, g));
}

TEST(Gains, Validation) {
  EXPECT_NO_THROW(FlockingGains{}.validate());
  EXPECT_THROW(gains(0, 1, 1, 1).validate(), ValidationError);
  EXPECT_THROW(gains(1, 1, 0.01, 1).validate(), ValidationError);
  EXPECT_THROW(gains(1, 1, 1, -1).validate(), ValidationError);
}

}  // namespace
}  // namespace swarm::flock
