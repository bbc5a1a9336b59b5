#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/random_scene.hpp"
#include "swarm/errors.hpp"
#include "swarm/sdf.hpp"

namespace swarm::sdf {
namespace {

using swarm::testing::RandomScene;

TEST(SdfEval, PrimitiveExamples) {
  EXPECT_DOUBLE_EQ(sphere(1).eval({2, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(translate({1, 0, 0}, sphere(1)).eval({1, 0, 0}), -1.0);
  const Shape pair = union_of({sphere(1), translate({3, 0, 0}, sphere(1))});
  EXPECT_DOUBLE_EQ(pair.eval({1.5, 0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(scale(2, sphere(1)).eval({4, 0, 0}), 2.0);
}

TEST(SdfEval, BoxCylinderConeTorus) {
  const Shape b = box({1, 2, 3});
  EXPECT_DOUBLE_EQ(b.eval({3, 0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(b.eval({0, 0, 0}), -1.0);
  EXPECT_NEAR(b.eval({2, 3, 0}), std::sqrt(2.0), 1e-15);

  const Shape c = cylinder(1, 2);
  EXPECT_DOUBLE_EQ(c.eval({3, 0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(c.eval({0, 0, 3}), 2.0);
  EXPECT_DOUBLE_EQ(c.eval({0, 0, 0}), -1.0);

  // Cone base radius 1 at z=-1, apex at z=+1.
  const Shape k = cone(1, 2);
  EXPECT_NEAR(k.eval({0, 0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(k.eval({0, 0, -2}), 1.0, 1e-15);
  EXPECT_NEAR(k.eval({0, 0, 3}), 2.0, 1e-15);
  // Point beside the slanted side: distance to the line through (1,-1) and
  // (0,1) in the (radial, z) half-plane.
  const Eigen::Vector2d a(1, -1), apex(0, 1), q(2, 0);
  const Eigen::Vector2d dir = (apex - a).normalized();
  const double expected = std::abs((q - a).x() * dir.y() - (q - a).y() * dir.x());
  EXPECT_NEAR(k.eval({2, 0, 0}), expected, 1e-12);

  const Shape t = torus(2, 0.5);
  EXPECT_DOUBLE_EQ(t.eval({2, 0, 0}), -0.5);
  EXPECT_DOUBLE_EQ(t.eval({0, 0, 0}), 1.5);
}

TEST(SdfEval, TetrahedronIsRegularAndExact) {
  const double edge = 1.0;
  const Shape t = tetrahedron(edge);
  const double k = edge / (2.0 * std::sqrt(2.0));
  const Vec3 v0(k, k, k), v1(k, -k, -k);
  EXPECT_NEAR((v0 - v1).norm(), edge, 1e-15);
  EXPECT_NEAR(t.eval(v0), 0.0, 1e-12);
  // Inradius of a regular tetrahedron is edge / (2 sqrt 6).
  EXPECT_NEAR(t.eval(Vec3::Zero()), -edge / (2.0 * std::sqrt(6.0)), 1e-12);
  // Beyond a vertex along its radial direction.
  EXPECT_NEAR(t.eval(v0 * 3.0), 2.0 * v0.norm(), 1e-12);
}

TEST(SdfEval, CapsulePlaneDifferenceIntersection) {
  const Shape c = capsule({0, 0, 0}, {0, 0, 2}, 0.5);
  EXPECT_DOUBLE_EQ(c.eval({1, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(c.eval({0, 0, 3}), 0.5);

  const Shape p = plane({0, 0, 2}, 1.0);
  EXPECT_DOUBLE_EQ(p.eval({5, 5, 3}), 2.0);

  const Shape hollow = difference(sphere(2), sphere(1));
  EXPECT_DOUBLE_EQ(hollow.eval({0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(hollow.eval({1.5, 0, 0}), -0.5);

  const Shape lens = intersection_of({sphere(1), translate({1, 0, 0}, sphere(1))});
  EXPECT_DOUBLE_EQ(lens.eval({0.5, 0, 0}), -0.5);
}

TEST(SdfEval, SmoothMinMatchesFormula) {
  EXPECT_DOUBLE_EQ(smooth_min(1.0, 5.0, 0.5), 1.0);
  // Equal arguments: h = 0.5, result = a - k/4.
  EXPECT_DOUBLE_EQ(smooth_min(1.0, 1.0, 0.4), 0.9);
}

TEST(SdfGradient, Examples) {
  const Vec3 g1 = sphere(1).gradient({2, 0, 0});
  EXPECT_NEAR((g1 - Vec3(1, 0, 0)).norm(), 0.0, 1e-6);
  const Vec3 g2 = sphere(1).gradient({0, 3, 0});
  EXPECT_NEAR((g2 - Vec3(0, 1, 0)).norm(), 0.0, 1e-6);
  // Outside the +x face of a box the closest feature is the face itself, so
  // the analytic gradient is the face normal.
  const Vec3 g3 = box({1, 1, 1}).gradient({5, 0, 0});
  EXPECT_NEAR((g3 - Vec3(1, 0, 0)).norm(), 0.0, 1e-6);
}

TEST(SdfGradient, UnitMagnitudeForExactPrimitives) {
  RandomScene rs(7);
  const Shape s = sphere(1.3);
  const Shape b = box({0.5, 0.7, 0.9});
  for (int i = 0; i < 500; ++i) {
    Vec3 p = rs.point(4.0);
    if (p.norm() < 0.1) continue;
    EXPECT_NEAR(s.gradient(p).norm(), 1.0, 1e-4);
    // Corner regions of the box: every coordinate beyond its half extent.
    const Vec3 corner = p.cwiseAbs() + Vec3(0.6, 0.8, 1.0);
    EXPECT_NEAR(b.gradient(corner).norm(), 1.0, 1e-4);
  }
}

TEST(SdfDirection, Examples) {
  const auto out = direction_to_surface(sphere(1), {2, 0, 0});
  EXPECT_NEAR((out.direction - Vec3(-1, 0, 0)).norm(), 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(out.distance, 1.0);

  const auto in = direction_to_surface(sphere(1), {0.5, 0, 0});
  EXPECT_NEAR((in.direction - Vec3(1, 0, 0)).norm(), 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(in.distance, 0.5);

  EXPECT_THROW(direction_to_surface(sphere(1), {0, 0, 0}), DegenerateGradient);
}

TEST(SdfDirection, StepLandsOnSurfaceForExactShapes) {
  RandomScene rs(11);
  const std::vector<Shape> shapes = {sphere(1.2), box({0.5, 1.0, 0.7}),
                                     torus(1.5, 0.3), cylinder(0.8, 1.5)};
  for (const Shape& s : shapes) {
    for (int i = 0; i < 200; ++i) {
      const Vec3 p = rs.point(3.0);
      SurfaceDirection d;
      try {
        d = direction_to_surface(s, p);
      } catch (const DegenerateGradient&) {
        continue;
      }
      const Vec3 landed = p + d.distance * d.direction;
      // One exact step reaches the surface except near the medial axis.
      EXPECT_LT(std::abs(s.eval(landed)), 1e-3 + 0.5 * d.distance) << p.transpose();
    }
  }
  // Sphere is exact everywhere off-center.
  for (int i = 0; i < 200; ++i) {
    const Vec3 p = rs.point(3.0);
    const auto d = direction_to_surface(sphere(1), p);
    EXPECT_NEAR(sphere(1).eval(p + d.distance * d.direction), 0.0, 1e-6);
  }
}

TEST(SdfBounds, Examples) {
  const Aabb a = sphere(1).bounds();
  EXPECT_EQ(a.min, Vec3(-1, -1, -1));
  EXPECT_EQ(a.max, Vec3(1, 1, 1));

  const Aabb b = translate({5, 0, 0}, sphere(1)).bounds();
  EXPECT_EQ(b.min, Vec3(4, -1, -1));
  EXPECT_EQ(b.max, Vec3(6, 1, 1));

  const Aabb c = union_of({sphere(1), translate({3, 0, 0}, sphere(1))}).bounds();
  EXPECT_EQ(c.min, Vec3(-1, -1, -1));
  EXPECT_EQ(c.max, Vec3(4, 1, 1));
}

TEST(SdfBounds, EmptyIntersectionAndUnboundedPlane) {
  const Shape disjoint =
      intersection_of({sphere(1), translate({5, 0, 0}, sphere(1))});
  EXPECT_TRUE(disjoint.bounds().is_empty());
  EXPECT_FALSE(plane({0, 0, 1}, 0).bounds().is_bounded());
  const Shape clipped = intersection_of({plane({0, 0, 1}, 0), sphere(1)});
  EXPECT_TRUE(clipped.bounds().is_bounded());
}

TEST(SdfProperties, BooleanExactness) {
  RandomScene rs(1);
  for (int i = 0; i < 1000; ++i) {
    const Shape a = rs.tree(2), b = rs.tree(2);
    const Vec3 p = rs.point();
    const double da = a.eval(p), db = b.eval(p);
    EXPECT_EQ(union_of({a, b}).eval(p), std::min(da, db));
    EXPECT_EQ(intersection_of({a, b}).eval(p), std::max(da, db));
    EXPECT_EQ(difference(a, b).eval(p), std::max(da, -db));
  }
}

TEST(SdfProperties, SmoothUnionLowerBound) {
  RandomScene rs(2);
  for (int i = 0; i < 1000; ++i) {
    const Shape a = rs.tree(1), b = rs.tree(1);
    const Vec3 p = rs.point();
    const double hard = std::min(a.eval(p), b.eval(p));
    const double k = rs.positive(0.01, 1.0);
    const double soft = smooth_union(k, {a, b}).eval(p);
    EXPECT_LE(soft, hard);
    EXPECT_GE(soft, hard - k / 4.0 - 1e-12);
    EXPECT_NEAR(smooth_union(1e-9, {a, b}).eval(p), hard, 1e-9);
  }
}

TEST(SdfProperties, TransformConsistency) {
  RandomScene rs(3);
  for (int i = 0; i < 1000; ++i) {
    const Shape n = rs.tree(2);
    const Vec3 p = rs.point(), t = rs.vec();
    const double s = rs.positive(0.1, 5.0);
    EXPECT_EQ(translate(t, n).eval(p), n.eval(p - t));
    EXPECT_EQ(scale(s, n).eval(p), s * n.eval(p / s));
  }
}

TEST(SdfProperties, SphereOracle) {
  RandomScene rs(4);
  for (int i = 0; i < 1000; ++i) {
    const double r = rs.positive(0.01, 10.0);
    const Vec3 p = rs.point(20.0);
    const double oracle =
        std::sqrt(p.x() * p.x() + p.y() * p.y() + p.z() * p.z()) - r;
    EXPECT_LT(std::abs(sphere(r).eval(p) - oracle), 1e-12);
  }
}

TEST(SdfProperties, AabbSoundness) {
  RandomScene rs(5, /*allow_planes=*/false);
  int inside_checked = 0;
  for (int t = 0; t < 200; ++t) {
    const Shape s = rs.tree(3);
    const Aabb box = s.bounds();
    if (box.is_empty()) continue;
    const Aabb region = box.padded_relative(0.5).padded(0.5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const Vec3 p = region.min + region.extent().cwiseProduct(
                                      Vec3(u(rs.rng()), u(rs.rng()), u(rs.rng())));
      if (s.eval(p) <= 0.0) {
        ++inside_checked;
        EXPECT_TRUE(box.contains(p, 1e-9)) << p.transpose();
      }
    }
  }
  EXPECT_GT(inside_checked, 1000);
}

TEST(SdfValidation, RejectsNonPositiveParameters) {
  EXPECT_THROW(sphere(0), ValidationError);
  EXPECT_THROW(sphere(-2), ValidationError);
  EXPECT_THROW(box({1, 0, 1}), ValidationError);
  EXPECT_THROW(scale(0, sphere(1)), ValidationError);
  EXPECT_THROW(union_of({sphere(1)}), ValidationError);
  EXPECT_THROW(smooth_union(0, {sphere(1), sphere(2)}), ValidationError);
  EXPECT_THROW(rotate({0, 0, 0}, 1, sphere(1)), ValidationError);
  EXPECT_THROW(plane({0, 0, 0}, 1), ValidationError);
}

TEST(SdfText, SingleLetterIIsOneCapsule) {
  const Shape t = text_shape("I", 1.0, 0.05);
  const auto& text = std::get<Text>(t.node().data);
  const auto* stroke = std::get_if<Capsule>(&text.strokes.node().data);
  ASSERT_NE(stroke, nullptr);
  EXPECT_NEAR((stroke->b - stroke->a).norm(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs((stroke->b - stroke->a).z()), 1.0, 1e-12);
}

TEST(SdfText, EmptyOrUnsupportedThrows) {
  EXPECT_THROW(text_shape("", 1.0, 0.05), UnsupportedText);
  EXPECT_THROW(text_shape("!?#", 1.0, 0.05), UnsupportedText);
  EXPECT_THROW(text_shape("   ", 1.0, 0.05), UnsupportedText);
}

TEST(SdfText, WidthFollowsFontTable) {
  const double r = 0.05;
  const Aabb b = text_shape("HI", 1.0, r).bounds();
  // H occupies its full cell; I is a stroke at the center of the next cell.
  const double expected = kGlyphAdvance + 0.5 * kGlyphWidth + 2.0 * r;
  EXPECT_NEAR(b.extent().x(), expected, 1e-12);
  EXPECT_NEAR(b.extent().z(), 1.0 + 2.0 * r, 1e-12);
  EXPECT_NEAR(b.extent().y(), 2.0 * r, 1e-12);
  // Scales with glyph height.
  const Aabb tall = text_shape("HI", 2.0, r).bounds();
  EXPECT_NEAR(tall.extent().x(), 2.0 * (expected - 2.0 * r) + 2.0 * r, 1e-12);
}

TEST(SdfText, LowercaseAndFilteringMatchUppercase) {
  const Vec3 p(0.1, 0.02, 0.3);
  EXPECT_EQ(text_shape("hi!", 1.0, 0.05).eval(p), text_shape("HI", 1.0, 0.05).eval(p));
}

TEST(SdfText, EveryGlyphHasSurface) {
  for (char c : std::string("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")) {
    const Shape g = text_shape(std::string(1, c), 1.0, 0.05);
    const Aabb b = g.bounds();
    EXPECT_TRUE(b.is_bounded()) << c;
    EXPECT_GT(b.extent().z(), 0.5) << c;
  }
}

}  // namespace
}  // namespace swarm::sdf
