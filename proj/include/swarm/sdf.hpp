#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "swarm/geometry.hpp"

// Constructive solid geometry over signed distance functions.
//
// Conventions: z is up. Distances are in meters, negative inside a solid and
// positive outside. Boolean combinators give bound (not exact) distances.
namespace swarm::sdf {

inline constexpr double kGradientStep = 1e-5;
inline constexpr double kDegenerateGradient = 1e-9;

struct Node;

// Immutable, cheaply copyable handle to a scene tree.
class Shape {
 public:
  explicit Shape(std::shared_ptr<const Node> node);

  double eval(const Vec3& p) const;

  // Central-difference estimate of the distance gradient.
  Vec3 gradient(const Vec3& p, double h = kGradientStep) const;

  // Conservative bounding box of the zero level set and interior.
  Aabb bounds() const;

  const Node& node() const { return *node_; }

  friend bool operator==(const Shape& a, const Shape& b);
  friend bool operator!=(const Shape& a, const Shape& b) { return !(a == b); }

 private:
  std::shared_ptr<const Node> node_;
};

struct Sphere {
  double radius;
};
// Centered box; `half_extents` is half the edge length per axis.
struct Box {
  Vec3 half_extents;
};
// Capped cylinder along z, centered on the origin.
struct Cylinder {
  double radius;
  double height;
};
// Capped cone along z: base disc at z = -height/2, apex at z = +height/2.
struct Cone {
  double radius;
  double height;
};
// Torus in the xy plane.
struct Torus {
  double major_radius;
  double minor_radius;
};
struct Capsule {
  Vec3 a;
  Vec3 b;
  double radius;
};
// Regular tetrahedron centered on its centroid.
struct Tetrahedron {
  double edge;
};
// Half-space {p : dot(p, n/|n|) <= offset}.
struct Plane {
  Vec3 normal;
  double offset;
};

struct Union {
  std::vector<Shape> children;
};
struct Intersection {
  std::vector<Shape> children;
};
struct Difference {
  Shape minuend;
  Shape subtrahend;
};
struct SmoothUnion {
  double k;
  std::vector<Shape> children;
};

struct Translate {
  Vec3 offset;
  Shape child;
};
struct Rotate {
  Vec3 axis;
  double angle;
  Eigen::Matrix3d rotation;  // derived from axis/angle
  Shape child;
};
struct Scale {
  double factor;
  Shape child;
};

// Stroke-font text; `strokes` is the capsule expansion used for evaluation.
struct Text {
  std::string text;
  double height;
  double stroke;
  Shape strokes;
};

struct Node {
  std::variant<Sphere, Box, Cylinder, Cone, Torus, Capsule, Tetrahedron, Plane,
               Union, Intersection, Difference, SmoothUnion, Translate, Rotate,
               Scale, Text>
      data;
};

// Factories validate their arguments and throw ValidationError.
Shape sphere(double radius);
Shape box(const Vec3& half_extents);
Shape cylinder(double radius, double height);
Shape cone(double radius, double height);
Shape torus(double major_radius, double minor_radius);
Shape capsule(const Vec3& a, const Vec3& b, double radius);
Shape tetrahedron(double edge);
Shape plane(const Vec3& normal, double offset);

Shape union_of(std::vector<Shape> children);
Shape intersection_of(std::vector<Shape> children);
Shape difference(Shape minuend, Shape subtrahend);
Shape smooth_union(double k, std::vector<Shape> children);

Shape translate(const Vec3& offset, Shape child);
Shape rotate(const Vec3& axis, double angle, Shape child);
Shape scale(double factor, Shape child);

// Text laid out left to right in the xz plane, centered on the origin.
// Letters are upper-cased; characters outside A-Z, 0-9 and space are dropped.
// Throws UnsupportedText when nothing drawable remains.
Shape text_shape(std::string_view text, double height, double stroke_radius);

// Horizontal distance between consecutive glyph origins, as a fraction of the
// glyph height.
inline constexpr double kGlyphAdvance = 0.9;
inline constexpr double kGlyphWidth = 0.6;

// Polynomial smooth minimum; lower-bounds min(a, b) with error at most k/4.
double smooth_min(double a, double b, double k);

struct SurfaceDirection {
  Vec3 direction;   // unit vector pointing toward the zero level set
  double distance;  // |f(p)|
};

// Throws DegenerateGradient when |grad f(p)| <= 1e-9.
SurfaceDirection direction_to_surface(const Shape& shape, const Vec3& p);

inline double eval(const Shape& shape, const Vec3& p) { return shape.eval(p); }
inline Aabb aabb(const Shape& shape) { return shape.bounds(); }

}  // namespace swarm::sdf
