#include <array>
#include <charconv>
#include <string>
#include <type_traits>

#include "swarm/dsl.hpp"

namespace swarm::dsl {
namespace {

std::string vec(const Vec3& v) {
  return "(" + format_number(v.x()) + " " + format_number(v.y()) + " " +
         format_number(v.z()) + ")";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void print(const sdf::Shape& shape, std::string& out);

void print_children(const std::vector<sdf::Shape>& children, std::string& out) {
  for (const auto& c : children) {
    out += ' ';
    print(c, out);
  }
}

void print(const sdf::Shape& shape, std::string& out) {
  using namespace sdf;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          out += "(sphere :r " + format_number(n.radius) + ")";
        } else if constexpr (std::is_same_v<T, Box>) {
          out += "(box :size " + vec(2.0 * n.half_extents) + ")";
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          out += "(cylinder :r " + format_number(n.radius) + " :h " +
                 format_number(n.height) + ")";
        } else if constexpr (std::is_same_v<T, Cone>) {
          out += "(cone :r " + format_number(n.radius) + " :h " +
                 format_number(n.height) + ")";
        } else if constexpr (std::is_same_v<T, Torus>) {
          out += "(torus :R " + format_number(n.major_radius) + " :r " +
                 format_number(n.minor_radius) + ")";
        } else if constexpr (std::is_same_v<T, Capsule>) {
          out += "(capsule :a " + vec(n.a) + " :b " + vec(n.b) + " :r " +
                 format_number(n.radius) + ")";
        } else if constexpr (std::is_same_v<T, Tetrahedron>) {
          out += "(tetrahedron :s " + format_number(n.edge) + ")";
        } else if constexpr (std::is_same_v<T, Plane>) {
          out += "(plane :n " + vec(n.normal) + " :d " + format_number(n.offset) + ")";
        } else if constexpr (std::is_same_v<T, Union>) {
          out += "(union";
          print_children(n.children, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Intersection>) {
          out += "(intersect";
          print_children(n.children, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Difference>) {
          out += "(difference ";
          print(n.minuend, out);
          out += ' ';
          print(n.subtrahend, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, SmoothUnion>) {
          out += "(smooth-union :k " + format_number(n.k);
          print_children(n.children, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Translate>) {
          out += "(translate " + vec(n.offset) + " ";
          print(n.child, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Rotate>) {
          out += "(rotate :axis " + vec(n.axis) + " :angle " + format_number(n.angle) + " ";
          print(n.child, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Scale>) {
          out += "(scale " + format_number(n.factor) + " ";
          print(n.child, out);
          out += ")";
        } else {
          static_assert(std::is_same_v<T, Text>);
          out += "(text " + quoted(n.text) + " :h " + format_number(n.height) +
                 " :stroke " + format_number(n.stroke) + ")";
        }
      },
      shape.node().data);
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string print_canonical(const sdf::Shape& shape) {
  std::string out;
  print(shape, out);
  return out;
}

}  // namespace swarm::dsl
