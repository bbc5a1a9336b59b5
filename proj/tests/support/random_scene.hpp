#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "swarm/sdf.hpp"

namespace swarm::testing {

// Random scene trees for property tests. Parameters use full double
// precision so printing exercises shortest round-trip formatting.
class RandomScene {
 public:
  explicit RandomScene(std::uint64_t seed, bool allow_planes = true)
      : rng_(seed), allow_planes_(allow_planes) {}

  double positive(double lo = 0.2, double hi = 2.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double signed_value(double mag = 2.0) {
    return std::uniform_real_distribution<double>(-mag, mag)(rng_);
  }
  Vec3 vec(double mag = 2.0) {
    return {signed_value(mag), signed_value(mag), signed_value(mag)};
  }
  Vec3 point(double mag = 4.0) { return vec(mag); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  sdf::Shape primitive() {
    switch (pick(allow_planes_ ? 8 : 7)) {
      case 0: return sdf::sphere(positive());
      case 1: return sdf::box(Vec3(positive(0.1, 1.0), positive(0.1, 1.0), positive(0.1, 1.0)));
      case 2: return sdf::cylinder(positive(), positive());
      case 3: return sdf::cone(positive(), positive());
      case 4: return sdf::torus(positive(0.5, 2.0), positive(0.1, 0.4));
      case 5: return sdf::capsule(vec(1.0), vec(1.0), positive(0.1, 0.5));
      case 6: return sdf::tetrahedron(positive());
      default: {
        Vec3 n = vec(1.0);
        if (n.norm() < 1e-3) n = Vec3::UnitZ();
        return sdf::plane(n, signed_value(1.0));
      }
    }
  }

  std::vector<sdf::Shape> children(int depth) {
    std::vector<sdf::Shape> out;
    const int n = 2 + pick(2);
    for (int i = 0; i < n; ++i) out.push_back(tree(depth - 1));
    return out;
  }

  sdf::Shape tree(int depth) {
    if (depth <= 0 || pick(3) == 0) return primitive();
    switch (pick(7)) {
      case 0: return sdf::union_of(children(depth));
      case 1: return sdf::intersection_of(children(depth));
      case 2: return sdf::difference(tree(depth - 1), tree(depth - 1));
      case 3: return sdf::smooth_union(positive(0.05, 0.5), children(depth));
      case 4: return sdf::translate(vec(), tree(depth - 1));
      case 5: {
        Vec3 axis = vec(1.0);
        if (axis.norm() < 1e-3) axis = Vec3::UnitX();
        return sdf::rotate(axis, signed_value(3.0), tree(depth - 1));
      }
      default: return sdf::scale(positive(0.3, 3.0), tree(depth - 1));
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool allow_planes_;
};

}  // namespace swarm::testing
