#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include <Eigen/Geometry>

#include "swarm/errors.hpp"
#include "swarm/sdf.hpp"

namespace swarm::sdf {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double dot2(const Vec3& v) { return v.squaredNorm(); }
double dot2(const Eigen::Vector2d& v) { return v.squaredNorm(); }

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Shape make(auto&& payload) {
  return Shape(std::make_shared<const Node>(
      Node{std::forward<decltype(payload)>(payload)}));
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(std::string(what) + " must be positive");
}

void require_finite(const Vec3& v, const char* what) {
  if (!v.allFinite()) throw ValidationError(std::string(what) + " must be finite");
}

void require_children(const std::vector<Shape>& c, const char* what) {
  if (c.size() < 2)
    throw ValidationError(std::string(what) + " needs at least two children");
}

// Unsigned distance from p to triangle abc.
double triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                         const Vec3& c) {
  const Vec3 ba = b - a, pa = p - a;
  const Vec3 cb = c - b, pb = p - b;
  const Vec3 ac = a - c, pc = p - c;
  const Vec3 nor = ba.cross(ac);
  const double inside = sign_of(ba.cross(nor).dot(pa)) +
                        sign_of(cb.cross(nor).dot(pb)) +
                        sign_of(ac.cross(nor).dot(pc));
  if (inside < 2.0) {
    auto edge = [](const Vec3& e, const Vec3& q) {
      return (e * std::clamp(e.dot(q) / dot2(e), 0.0, 1.0) - q).squaredNorm();
    };
    return std::sqrt(std::min({edge(ba, pa), edge(cb, pb), edge(ac, pc)}));
  }
  return std::sqrt(nor.dot(pa) * nor.dot(pa) / dot2(nor));
}

std::array<Vec3, 4> tetrahedron_vertices(double edge) {
  const double k = edge / (2.0 * std::sqrt(2.0));
  return {Vec3(k, k, k), Vec3(k, -k, -k), Vec3(-k, k, -k), Vec3(-k, -k, k)};
}

double eval_tetrahedron(const Tetrahedron& t, const Vec3& p) {
  const auto v = tetrahedron_vertices(t.edge);
  const double inradius = v[0].norm() / 3.0;
  double plane = -std::numeric_limits<double>::infinity();
  for (const auto& vi : v) plane = std::max(plane, -vi.normalized().dot(p));
  plane -= inradius;
  if (plane <= 0.0) return plane;
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    d = std::min(d, triangle_distance(p, v[(i + 1) % 4], v[(i + 2) % 4],
                                      v[(i + 3) % 4]));
  }
  return d;
}

double eval_cone(const Cone& c, const Vec3& p) {
  // Capped cone with bottom radius r1, top radius 0, half height h.
  const double h = 0.5 * c.height, r1 = c.radius, r2 = 0.0;
  const Eigen::Vector2d q(p.head<2>().norm(), p.z());
  const Eigen::Vector2d k1(r2, h);
  const Eigen::Vector2d k2(r2 - r1, 2.0 * h);
  const Eigen::Vector2d ca(q.x() - std::min(q.x(), q.y() < 0.0 ? r1 : r2),
                           std::abs(q.y()) - h);
  const Eigen::Vector2d cb =
      q - k1 + k2 * std::clamp((k1 - q).dot(k2) / dot2(k2), 0.0, 1.0);
  const double s = (cb.x() < 0.0 && ca.y() < 0.0) ? -1.0 : 1.0;
  return s * std::sqrt(std::min(dot2(ca), dot2(cb)));
}

Aabb transform_box(const Aabb& b, const Eigen::Matrix3d& r) {
  if (b.is_empty()) return b;
  if (!b.is_bounded()) return Aabb::infinite();
  Aabb out = Aabb::empty();
  for (int i = 0; i < 8; ++i) {
    const Vec3 corner((i & 1) ? b.max.x() : b.min.x(),
                      (i & 2) ? b.max.y() : b.min.y(),
                      (i & 4) ? b.max.z() : b.min.z());
    const Vec3 q = r * corner;
    out = out.hull(Aabb{q, q});
  }
  return out;
}

bool same_children(const std::vector<Shape>& a, const std::vector<Shape>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

Shape::Shape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

double smooth_min(double a, double b, double k) {
  const double h = std::clamp(0.5 + 0.5 * (b - a) / k, 0.0, 1.0);
  // Exact value never exceeds min(a, b); clamp away the rounding.
  return std::min(b + (a - b) * h - k * h * (1.0 - h), std::min(a, b));
}

double Shape::eval(const Vec3& p) const {
  return std::visit(
      Overloaded{
          [&](const Sphere& s) { return p.norm() - s.radius; },
          [&](const Box& b) {
            const Vec3 q = p.cwiseAbs() - b.half_extents;
            return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
          },
          [&](const Cylinder& c) {
            const Eigen::Vector2d d(p.head<2>().norm() - c.radius,
                                    std::abs(p.z()) - 0.5 * c.height);
            return std::min(d.maxCoeff(), 0.0) + d.cwiseMax(0.0).norm();
          },
          [&](const Cone& c) { return eval_cone(c, p); },
          [&](const Torus& t) {
            const Eigen::Vector2d q(p.head<2>().norm() - t.major_radius, p.z());
            return q.norm() - t.minor_radius;
          },
          [&](const Capsule& c) {
            const Vec3 pa = p - c.a, ba = c.b - c.a;
            const double len2 = dot2(ba);
            const double h =
                len2 > 0.0 ? std::clamp(pa.dot(ba) / len2, 0.0, 1.0) : 0.0;
            return (pa - ba * h).norm() - c.radius;
          },
          [&](const Tetrahedron& t) { return eval_tetrahedron(t, p); },
          [&](const Plane& pl) {
            return p.dot(pl.normal.normalized()) - pl.offset;
          },
          [&](const Union& u) {
            double d = u.children.front().eval(p);
            for (std::size_t i = 1; i < u.children.size(); ++i)
              d = std::min(d, u.children[i].eval(p));
            return d;
          },
          [&](const Intersection& u) {
            double d = u.children.front().eval(p);
            for (std::size_t i = 1; i < u.children.size(); ++i)
              d = std::max(d, u.children[i].eval(p));
            return d;
          },
          [&](const Difference& d) {
            return std::max(d.minuend.eval(p), -d.subtrahend.eval(p));
          },
          [&](const SmoothUnion& u) {
            double d = u.children.front().eval(p);
            for (std::size_t i = 1; i < u.children.size(); ++i)
              d = smooth_min(d, u.children[i].eval(p), u.k);
            return d;
          },
          [&](const Translate& t) { return t.child.eval(p - t.offset); },
          [&](const Rotate& r) {
            return r.child.eval(r.rotation.transpose() * p);
          },
          [&](const Scale& s) { return s.child.eval(p / s.factor) * s.factor; },
          [&](const Text& t) { return t.strokes.eval(p); },
      },
      node_->data);
}

Vec3 Shape::gradient(const Vec3& p, double h) const {
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 lo = p, hi = p;
    lo[i] -= h;
    hi[i] += h;
    g[i] = (eval(hi) - eval(lo)) / (2.0 * h);
  }
  return g;
}

Aabb Shape::bounds() const {
  return std::visit(
      Overloaded{
          [](const Sphere& s) {
            return Aabb{Vec3::Constant(-s.radius), Vec3::Constant(s.radius)};
          },
          [](const Box& b) { return Aabb{-b.half_extents, b.half_extents}; },
          [](const Cylinder& c) {
            const Vec3 e(c.radius, c.radius, 0.5 * c.height);
            return Aabb{-e, e};
          },
          [](const Cone& c) {
            const Vec3 e(c.radius, c.radius, 0.5 * c.height);
            return Aabb{-e, e};
          },
          [](const Torus& t) {
            const double r = t.major_radius + t.minor_radius;
            const Vec3 e(r, r, t.minor_radius);
            return Aabb{-e, e};
          },
          [](const Capsule& c) {
            return Aabb{c.a.cwiseMin(c.b).array() - c.radius,
                        c.a.cwiseMax(c.b).array() + c.radius};
          },
          [](const Tetrahedron& t) {
            const double k = t.edge / (2.0 * std::sqrt(2.0));
            return Aabb{Vec3::Constant(-k), Vec3::Constant(k)};
          },
          [](const Plane&) { return Aabb::infinite(); },
          [](const Union& u) {
            Aabb b = Aabb::empty();
            for (const auto& c : u.children) b = b.hull(c.bounds());
            return b;
          },
          [](const Intersection& u) {
            Aabb b = Aabb::infinite();
            for (const auto& c : u.children) b = b.intersect(c.bounds());
            return b;
          },
          [](const Difference& d) { return d.minuend.bounds(); },
          [](const SmoothUnion& u) {
            Aabb b = Aabb::empty();
            for (const auto& c : u.children) b = b.hull(c.bounds());
            return b.padded(u.k);
          },
          [](const Translate& t) {
            const Aabb b = t.child.bounds();
            if (b.is_empty()) return b;
            return Aabb{b.min + t.offset, b.max + t.offset};
          },
          [](const Rotate& r) {
            return transform_box(r.child.bounds(), r.rotation);
          },
          [](const Scale& s) {
            const Aabb b = s.child.bounds();
            if (b.is_empty()) return b;
            return Aabb{b.min * s.factor, b.max * s.factor};
          },
          [](const Text& t) { return t.strokes.bounds(); },
      },
      node_->data);
}

bool operator==(const Shape& lhs, const Shape& rhs) {
  if (lhs.node_ == rhs.node_) return true;
  const auto& a = lhs.node_->data;
  const auto& b = rhs.node_->data;
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, Sphere>) {
          return x.radius == y.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          return x.half_extents == y.half_extents;
        } else if constexpr (std::is_same_v<T, Cylinder> ||
                             std::is_same_v<T, Cone>) {
          return x.radius == y.radius && x.height == y.height;
        } else if constexpr (std::is_same_v<T, Torus>) {
          return x.major_radius == y.major_radius &&
                 x.minor_radius == y.minor_radius;
        } else if constexpr (std::is_same_v<T, Capsule>) {
          return x.a == y.a && x.b == y.b && x.radius == y.radius;
        } else if constexpr (std::is_same_v<T, Tetrahedron>) {
          return x.edge == y.edge;
        } else if constexpr (std::is_same_v<T, Plane>) {
          return x.normal == y.normal && x.offset == y.offset;
        } else if constexpr (std::is_same_v<T, Union> ||
                             std::is_same_v<T, Intersection>) {
          return same_children(x.children, y.children);
        } else if constexpr (std::is_same_v<T, Difference>) {
          return x.minuend == y.minuend && x.subtrahend == y.subtrahend;
        } else if constexpr (std::is_same_v<T, SmoothUnion>) {
          return x.k == y.k && same_children(x.children, y.children);
        } else if constexpr (std::is_same_v<T, Translate>) {
          return x.offset == y.offset && x.child == y.child;
        } else if constexpr (std::is_same_v<T, Rotate>) {
          return x.axis == y.axis && x.angle == y.angle && x.child == y.child;
        } else if constexpr (std::is_same_v<T, Scale>) {
          return x.factor == y.factor && x.child == y.child;
        } else {
          static_assert(std::is_same_v<T, Text>);
          return x.text == y.text && x.height == y.height &&
                 x.stroke == y.stroke;
        }
      },
      a);
}

Shape sphere(double radius) {
  require_positive(radius, "radius");
  return make(Sphere{radius});
}

Shape box(const Vec3& half_extents) {
  for (int i = 0; i < 3; ++i) require_positive(half_extents[i], "box size");
  return make(Box{half_extents});
}

Shape cylinder(double radius, double height) {
  require_positive(radius, "radius");
  require_positive(height, "height");
  return make(Cylinder{radius, height});
}

Shape cone(double radius, double height) {
  require_positive(radius, "radius");
  require_positive(height, "height");
  return make(Cone{radius, height});
}

Shape torus(double major_radius, double minor_radius) {
  require_positive(major_radius, "major radius");
  require_positive(minor_radius, "minor radius");
  return make(Torus{major_radius, minor_radius});
}

Shape capsule(const Vec3& a, const Vec3& b, double radius) {
  require_finite(a, "capsule endpoint");
  require_finite(b, "capsule endpoint");
  require_positive(radius, "radius");
  return make(Capsule{a, b, radius});
}

Shape tetrahedron(double edge) {
  require_positive(edge, "edge length");
  return make(Tetrahedron{edge});
}

Shape plane(const Vec3& normal, double offset) {
  require_finite(normal, "plane normal");
  if (normal.norm() <= 0.0) throw ValidationError("plane normal must be non-zero");
  if (!std::isfinite(offset)) throw ValidationError("plane offset must be finite");
  return make(Plane{normal, offset});
}

Shape union_of(std::vector<Shape> children) {
  require_children(children, "union");
  return make(Union{std::move(children)});
}

Shape intersection_of(std::vector<Shape> children) {
  require_children(children, "intersect");
  return make(Intersection{std::move(children)});
}

Shape difference(Shape minuend, Shape subtrahend) {
  return make(Difference{std::move(minuend), std::move(subtrahend)});
}

Shape smooth_union(double k, std::vector<Shape> children) {
  require_positive(k, "smoothing k");
  require_children(children, "smooth-union");
  return make(SmoothUnion{k, std::move(children)});
}

Shape translate(const Vec3& offset, Shape child) {
  require_finite(offset, "translation");
  return make(Translate{offset, std::move(child)});
}

Shape rotate(const Vec3& axis, double angle, Shape child) {
  require_finite(axis, "rotation axis");
  if (axis.norm() <= 0.0) throw ValidationError("rotation axis must be non-zero");
  if (!std::isfinite(angle)) throw ValidationError("rotation angle must be finite");
  Eigen::Matrix3d r = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return make(Rotate{axis, angle, r, std::move(child)});
}

Shape scale(double factor, Shape child) {
  require_positive(factor, "scale factor");
  return make(Scale{factor, std::move(child)});
}

SurfaceDirection direction_to_surface(const Shape& shape, const Vec3& p) {
  const double d = shape.eval(p);
  const Vec3 g = shape.gradient(p);
  const double norm = g.norm();
  if (!(norm > kDegenerateGradient)) throw DegenerateGradient();
  const double s = d < 0.0 ? -1.0 : 1.0;
  return {-s * g / norm, std::abs(d)};
}

}  // namespace swarm::sdf
