#include <array>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "swarm/errors.hpp"
#include "swarm/sdf.hpp"

namespace swarm::sdf {
namespace {

// Glyph cell nodes on a 3x3 grid: columns left/center/right, rows
// bottom/middle/top. A stroke joins two nodes; strokes run along the
// 16-segment display lines (edges, center verticals, and diagonals).
enum GridNode : unsigned char { BL, BC, BR, ML, MC, MR, TL, TC, TR };

struct Stroke {
  GridNode from;
  GridNode to;
};

using Glyph = std::vector<Stroke>;

const Glyph& glyph_for(char c) {
  static const std::array<Glyph, 36> kGlyphs = {{
      // A-Z
      {{BL, TL}, {TL, TR}, {TR, BR}, {ML, MR}},
      {{TL, TR}, {TR, BR}, {BL, BR}, {TC, BC}, {MC, MR}},
      {{TR, TL}, {TL, BL}, {BL, BR}},
      {{TL, TR}, {TR, BR}, {BR, BL}, {TC, BC}},
      {{TR, TL}, {TL, BL}, {BL, BR}, {ML, MC}},
      {{TR, TL}, {TL, BL}, {ML, MC}},
      {{TR, TL}, {TL, BL}, {BL, BR}, {BR, MR}, {MR, MC}},
      {{TL, BL}, {TR, BR}, {ML, MR}},
      {{TC, BC}},
      {{TR, BR}, {BR, BL}, {BL, ML}},
      {{TL, BL}, {ML, TR}, {ML, BR}},
      {{TL, BL}, {BL, BR}},
      {{BL, TL}, {TL, MC}, {MC, TR}, {TR, BR}},
      {{BL, TL}, {TL, BR}, {BR, TR}},
      {{TL, TR}, {TR, BR}, {BR, BL}, {BL, TL}},
      {{BL, TL}, {TL, TR}, {TR, MR}, {MR, ML}},
      {{TL, TR}, {TR, BR}, {BR, BL}, {BL, TL}, {MC, BR}},
      {{BL, TL}, {TL, TR}, {TR, MR}, {MR, ML}, {MC, BR}},
      {{TR, TL}, {TL, ML}, {ML, MR}, {MR, BR}, {BR, BL}},
      {{TL, TR}, {TC, BC}},
      {{TL, BL}, {BL, BR}, {BR, TR}},
      {{TL, BC}, {BC, TR}},
      {{TL, BL}, {BL, MC}, {MC, BR}, {BR, TR}},
      {{TL, BR}, {TR, BL}},
      {{TL, MC}, {TR, MC}, {MC, BC}},
      {{TL, TR}, {TR, BL}, {BL, BR}},
      // 0-9
      {{TL, TR}, {TR, BR}, {BR, BL}, {BL, TL}, {TR, BL}},
      {{TC, BC}, {ML, TC}},
      {{TL, TR}, {TR, MR}, {MR, ML}, {ML, BL}, {BL, BR}},
      {{TL, TR}, {TR, BR}, {BR, BL}, {ML, MR}},
      {{TL, ML}, {ML, MR}, {TR, BR}},
      {{TR, TL}, {TL, ML}, {ML, MR}, {MR, BR}, {BR, BL}},
      {{TR, TL}, {TL, BL}, {BL, BR}, {BR, MR}, {MR, ML}},
      {{TL, TR}, {TR, BR}},
      {{TL, TR}, {TR, BR}, {BR, BL}, {BL, TL}, {ML, MR}},
      {{MR, ML}, {ML, TL}, {TL, TR}, {TR, BR}, {BR, BL}},
  }};
  if (c >= 'A' && c <= 'Z') return kGlyphs[static_cast<std::size_t>(c - 'A')];
  return kGlyphs[26 + static_cast<std::size_t>(c - '0')];
}

// Node position in glyph units (height 1), before centering.
Vec3 node_position(GridNode n) {
  const int col = n % 3;
  const int row = n / 3;
  return {col * 0.5 * kGlyphWidth, 0.0, row * 0.5};
}

}  // namespace

Shape text_shape(std::string_view text, double height, double stroke_radius) {
  if (!(height > 0.0)) throw ValidationError("text height must be positive");
  if (!(stroke_radius > 0.0))
    throw ValidationError("stroke radius must be positive");

  std::string filtered;
  for (char c : text) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if ((u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u == ' ')
      filtered.push_back(u);
  }
  // Trim spaces so layout is centered on the visible glyphs.
  const auto first = filtered.find_first_not_of(' ');
  if (first == std::string::npos)
    throw UnsupportedText("no drawable characters in \"" + std::string(text) + "\"");
  filtered = filtered.substr(first, filtered.find_last_not_of(' ') - first + 1);

  const double width =
      static_cast<double>(filtered.size() - 1) * kGlyphAdvance + kGlyphWidth;
  const Vec3 origin(-0.5 * width, 0.0, -0.5);

  std::vector<Shape> capsules;
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    if (filtered[i] == ' ') continue;
    const Vec3 cell = origin + Vec3(static_cast<double>(i) * kGlyphAdvance, 0, 0);
    for (const Stroke& s : glyph_for(filtered[i])) {
      capsules.push_back(capsule((cell + node_position(s.from)) * height,
                                 (cell + node_position(s.to)) * height,
                                 stroke_radius));
    }
  }
  Shape strokes = capsules.size() == 1 ? capsules.front()
                                       : union_of(std::move(capsules));
  return Shape(std::make_shared<const Node>(
      Node{Text{std::string(text), height, stroke_radius, std::move(strokes)}}));
}

}  // namespace swarm::sdf
