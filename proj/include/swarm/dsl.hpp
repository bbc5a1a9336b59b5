#pragma once

#include <string>
#include <string_view>

#include "swarm/sdf.hpp"

// S-expression scene language.
//
//   (union (sphere :r 1) (translate (3 0 0) (sphere :r 1)))
//
// Lengths are meters, angles radians. `;` starts a comment running to the end
// of the line.
namespace swarm::dsl {

enum class Origin { kUserDirect, kLlmExtracted };

struct SceneSource {
  std::string text;
  Origin origin = Origin::kUserDirect;
};

inline constexpr std::string_view kGrammar =
    R"grammar(scene    := node ;
node     := "(" ident { arg } ")" ;
arg      := node | vec3 | number | string | keyword number | keyword vec3 | keyword string ;
vec3     := "(" number number number ")" ;
keyword  := ":" ident ;
ident    := [a-z][a-z0-9-]* ;)grammar";

// Registered heads and their arguments, one per line.
inline constexpr std::string_view kHeads =
    R"heads((sphere :r R)                      ; ball of radius R
(box :size (X Y Z))                ; centered box, full edge lengths
(cylinder :r R :h H)               ; z-axis cylinder, centered
(cone :r R :h H)                   ; base radius R at z=-H/2, apex at z=+H/2
(torus :R MAJOR :r MINOR)          ; ring in the xy plane
(capsule :a (X Y Z) :b (X Y Z) :r R)
(tetrahedron :s EDGE)              ; regular, centered on its centroid
(plane :n (X Y Z) :d D)            ; half-space dot(p, n) <= D
(union A B ...)
(intersect A B ...)
(difference A B)                   ; A minus B
(smooth-union :k K A B ...)        ; blended union, K in meters
(translate (X Y Z) A)
(rotate :axis (X Y Z) :angle RADIANS A)
(scale S A)                        ; uniform scale
(text "WORD" :h HEIGHT :stroke RADIUS))heads";

// Throws ParseError on syntax or arity problems and ValidationError on
// out-of-range values.
sdf::Shape parse(const SceneSource& source);
sdf::Shape parse(std::string_view text);

// Single-line form; parse(print_canonical(s)) == s.
std::string print_canonical(const sdf::Shape& shape);

// Shortest decimal string that reads back to exactly `value`.
std::string format_number(double value);

// Pulls scene code out of free-form model output: the last fenced block
// holding an s-expression wins, else the longest balanced "(...)" span.
// Throws NoCodeFound.
SceneSource extract_code(std::string_view raw);

}  // namespace swarm::dsl
