#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/sdf.hpp"

namespace swarm::dist {

struct DistributionWeights {
  double alpha = 1.0;   // surface adherence
  double beta = 0.2;    // spread
  double gamma = 0.05;  // hull volume
  double softmin_temperature = 0.05;  // meters
};

struct CostBreakdown {
  double c_sdf = 0.0;
  double c_dist = 0.0;
  double c_vol = 0.0;
  double total = 0.0;
};

// Scene AABB grown by 10% per side. Throws SamplingFailed for empty or
// unbounded scenes.
Aabb sampling_bounds(const sdf::Shape& shape);

// m = max(50 n, 2000).
std::size_t dense_sample_count(std::size_t n);

PointCloud sample_dense(const sdf::Shape& shape, std::size_t m, const Aabb& bounds,
                        std::uint64_t seed);

struct Projection {
  PointCloud points;
  std::vector<bool> converged;
  bool all_converged() const;
};

// Per-point bounded minimization of f(p)^2. The overload without bounds uses
// sampling_bounds when the scene is bounded.
Projection project_to_surface(const sdf::Shape& shape, const PointCloud& cloud, double tol,
                              const Aabb& bounds);
Projection project_to_surface(const sdf::Shape& shape, const PointCloud& cloud, double tol);

struct KMeansResult {
  PointCloud centroids;
  std::vector<std::size_t> labels;
  std::vector<double> inertia;  // one entry per Lloyd iteration
  int iterations = 0;
};

KMeansResult kmeans(const PointCloud& cloud, std::size_t k, std::uint64_t seed);
PointCloud kmeans_reduce(const PointCloud& cloud, std::size_t k, std::uint64_t seed);

struct Hull {
  std::vector<std::array<std::size_t, 3>> faces;  // outward, counter-clockwise
  std::vector<std::size_t> vertices;              // sorted, unique
  double volume = 0.0;
};

// Incremental construction. Fewer than four affinely independent points give
// an empty hull with zero volume.
Hull convex_hull(const PointCloud& cloud);
double convex_hull_volume(const PointCloud& cloud);

CostBreakdown distribution_cost(const PointCloud& cloud, const sdf::Shape& shape,
                                const DistributionWeights& w);

// alpha * c_sdf - beta * c_dist with its analytic gradient (one entry per
// point). `grad` may be null.
double smooth_cost(const PointCloud& cloud, const sdf::Shape& shape,
                   const DistributionWeights& w, std::vector<Vec3>* grad);

// d V / d p_i by central differences over the hull vertices; zero for
// interior points.
std::vector<Vec3> hull_volume_gradient(const PointCloud& cloud, double step = 1e-6);

struct Optimized {
  PointCloud points;
  CostBreakdown cost;
  CostBreakdown initial;
  int iterations = 0;
};

Optimized optimize_distribution(const sdf::Shape& shape, const PointCloud& init,
                                const DistributionWeights& w, int max_iters = 200);

struct PipelineOptions {
  std::uint64_t seed = 0;
  double tol = 1e-3;
  DistributionWeights weights;
  int max_iters = 200;
};

// sample_dense -> project_to_surface -> kmeans_reduce -> optimize_distribution.
PointCloud generate_targets(const sdf::Shape& shape, std::size_t n,
                            const PipelineOptions& options = {});

// Header "x,y,z", one point per row, 9 significant digits.
void write_points_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace swarm::dist
