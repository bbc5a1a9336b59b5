#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace swarm {

using Vec3 = Eigen::Vector3d;

// Axis-aligned bounding box. An empty box has min > max on some axis;
// unbounded boxes carry infinite corners.
struct Aabb {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  static Aabb empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {Vec3::Constant(inf), Vec3::Constant(-inf)};
  }
  static Aabb infinite() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {Vec3::Constant(-inf), Vec3::Constant(inf)};
  }

  bool is_empty() const { return (min.array() > max.array()).any(); }
  bool is_bounded() const {
    return min.allFinite() && max.allFinite();
  }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }

  bool contains(const Vec3& p, double eps = 0.0) const {
    return (p.array() >= min.array() - eps).all() &&
           (p.array() <= max.array() + eps).all();
  }

  Aabb hull(const Aabb& o) const {
    if (is_empty()) return o;
    if (o.is_empty()) return *this;
    return {min.cwiseMin(o.min), max.cwiseMax(o.max)};
  }

  Aabb intersect(const Aabb& o) const {
    Aabb r{min.cwiseMax(o.min), max.cwiseMin(o.max)};
    return r.is_empty() ? empty() : r;
  }

  Aabb padded(double amount) const {
    if (is_empty()) return *this;
    return {min.array() - amount, max.array() + amount};
  }

  // Grow each side by `fraction` of the box extent along that axis.
  Aabb padded_relative(double fraction) const {
    if (is_empty()) return *this;
    Vec3 pad = fraction * extent();
    return {min - pad, max + pad};
  }

  Vec3 clamp(const Vec3& p) const { return p.cwiseMax(min).cwiseMin(max); }
};

// Ordered point set; the target-surface representation.
using PointCloud = std::vector<Vec3>;

}  // namespace swarm
