#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "swarm/dsl.hpp"
#include "swarm/errors.hpp"

namespace swarm::dsl {
namespace {

enum class TokenKind { kLParen, kRParen, kNumber, kString, kKeyword, kIdent, kEnd };

struct Token {
  TokenKind kind;
  std::size_t offset;
  std::string text;  // identifier/keyword name, unescaped string, or number
  double number = 0.0;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::kLParen: return "'('";
    case TokenKind::kRParen: return "')'";
    case TokenKind::kNumber: return "number " + t.text;
    case TokenKind::kString: return "string \"" + t.text + "\"";
    case TokenKind::kKeyword: return "keyword :" + t.text;
    case TokenKind::kIdent: return "identifier '" + t.text + "'";
    case TokenKind::kEnd: return "end of input";
  }
  return "?";
}

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_alpha(char c) { return is_lower(c) || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  [[noreturn]] void fail(std::size_t offset, std::string expected,
                         std::string found) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(offset, line, col, std::move(expected), std::move(found));
  }

  std::string position(std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return std::to_string(line) + ":" + std::to_string(col);
  }

  const Token& peek() {
    if (!peeked_) peeked_ = lex();
    return *peeked_;
  }

  Token next() {
    Token t = peek();
    peeked_.reset();
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  Token lex() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {TokenKind::kEnd, start, {}};
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      return {TokenKind::kLParen, start, "("};
    }
    if (c == ')') {
      ++pos_;
      return {TokenKind::kRParen, start, ")"};
    }
    if (c == '"') return lex_string();
    if (c == ':') {
      ++pos_;
      if (pos_ >= src_.size() || !is_alpha(src_[pos_]))
        fail(pos_, "keyword name", pos_ < src_.size()
                                       ? "'" + std::string(1, src_[pos_]) + "'"
                                       : "end of input");
      const std::size_t name = pos_;
      while (pos_ < src_.size() &&
             (is_alpha(src_[pos_]) || is_digit(src_[pos_]) || src_[pos_] == '-'))
        ++pos_;
      return {TokenKind::kKeyword, start, std::string(src_.substr(name, pos_ - name))};
    }
    if (is_lower(c)) {
      while (pos_ < src_.size() &&
             (is_lower(src_[pos_]) || is_digit(src_[pos_]) || src_[pos_] == '-'))
        ++pos_;
      if (pos_ < src_.size() && src_[pos_] >= 'A' && src_[pos_] <= 'Z')
        fail(pos_, "lowercase identifier", "'" + std::string(1, src_[pos_]) + "'");
      return {TokenKind::kIdent, start, std::string(src_.substr(start, pos_ - start))};
    }
    if (is_digit(c) || c == '-' || c == '+' || c == '.') return lex_number();
    fail(start, "token", "'" + std::string(1, c) + "'");
  }

  Token lex_number() {
    const std::size_t start = pos_;
    std::size_t i = pos_;
    if (src_[i] == '+' || src_[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < src_.size() && is_digit(src_[i])) ++i, ++digits;
    if (i < src_.size() && src_[i] == '.') {
      ++i;
      while (i < src_.size() && is_digit(src_[i])) ++i, ++digits;
    }
    if (digits == 0)
      fail(start, "number", i < src_.size() ? "'" + std::string(1, src_[i]) + "'"
                                            : "end of input");
    if (i < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j >= src_.size() || !is_digit(src_[j])) fail(j, "exponent digits", "malformed exponent");
      while (j < src_.size() && is_digit(src_[j])) ++j;
      i = j;
    }
    if (i < src_.size() && (is_alpha(src_[i]) || src_[i] == '.'))
      fail(i, "delimiter after number", "'" + std::string(1, src_[i]) + "'");

    // from_chars rejects a leading '+'.
    std::size_t parse_from = src_[start] == '+' ? start + 1 : start;
    double value = 0.0;
    const char* first = src_.data() + parse_from;
    const char* last = src_.data() + i;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
      fail(start, "finite number", "'" + std::string(src_.substr(start, i - start)) + "'");
    pos_ = i;
    return {TokenKind::kNumber, start, std::string(src_.substr(start, i - start)), value};
  }

  Token lex_string() {
    const std::size_t start = pos_;
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail(pos_, "closing '\"'", "end of input");
      const char c = src_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= src_.size()) fail(pos_, "escape character", "end of input");
        const char e = src_[pos_];
        if (e != '"' && e != '\\') fail(pos_, "'\"' or '\\\\' after '\\\\'", "'" + std::string(1, e) + "'");
        out.push_back(e);
        ++pos_;
      } else {
        out.push_back(c);
      }
    }
    return {TokenKind::kString, start, std::move(out)};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::optional<Token> peeked_;
};

struct Expr;

struct List {
  std::string head;
  std::size_t head_offset;
  std::size_t close_offset;
  std::vector<Expr> args;
};

struct Expr {
  std::size_t offset;
  std::optional<std::string> keyword;  // set for ":name value" arguments
  std::variant<double, Vec3, std::string, List> value;
};

// Reads one argument value (no keyword). Opening paren already peeked.
class Reader {
 public:
  explicit Reader(Lexer& lex) : lex_(lex) {}

  List read_node() {
    const Token open = lex_.next();
    if (open.kind != TokenKind::kLParen) lex_.fail(open.offset, "'('", describe(open));
    const Token head = lex_.next();
    if (head.kind != TokenKind::kIdent)
      lex_.fail(head.offset, "shape name", describe(head));
    return read_node_body(head);
  }

 private:
  List read_node_body(const Token& head) {
    List list{head.text, head.offset, 0, {}};
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == TokenKind::kRParen) {
        list.close_offset = t.offset;
        lex_.next();
        return list;
      }
      if (t.kind == TokenKind::kEnd) lex_.fail(t.offset, "')'", describe(t));
      if (t.kind == TokenKind::kKeyword) {
        const Token kw = lex_.next();
        const Token& v = lex_.peek();
        if (v.kind != TokenKind::kNumber && v.kind != TokenKind::kString &&
            v.kind != TokenKind::kLParen)
          lex_.fail(v.offset, "value for :" + kw.text, describe(v));
        Expr e = read_value(/*allow_node=*/false);
        e.keyword = kw.text;
        e.offset = kw.offset;
        list.args.push_back(std::move(e));
        continue;
      }
      list.args.push_back(read_value(/*allow_node=*/true));
    }
  }

  Expr read_value(bool allow_node) {
    const Token t = lex_.next();
    switch (t.kind) {
      case TokenKind::kNumber: return {t.offset, std::nullopt, t.number};
      case TokenKind::kString: return {t.offset, std::nullopt, t.text};
      case TokenKind::kLParen: {
        const Token inner = lex_.next();
        if (inner.kind == TokenKind::kNumber) {
          Vec3 v;
          v[0] = inner.number;
          for (int i = 1; i < 3; ++i) {
            const Token n = lex_.next();
            if (n.kind != TokenKind::kNumber)
              lex_.fail(n.offset, "number (vectors have three components)", describe(n));
            v[i] = n.number;
          }
          const Token close = lex_.next();
          if (close.kind != TokenKind::kRParen)
            lex_.fail(close.offset, "')' after three vector components", describe(close));
          return {t.offset, std::nullopt, v};
        }
        if (inner.kind == TokenKind::kIdent) {
          if (!allow_node)
            lex_.fail(inner.offset, "number, vector or string", describe(inner));
          return {t.offset, std::nullopt, read_node_body(inner)};
        }
        lex_.fail(inner.offset, allow_node ? "shape name or number" : "number",
                  describe(inner));
      }
      default:
        lex_.fail(t.offset, "argument", describe(t));
    }
  }

  Lexer& lex_;
};

enum class ArgType { kNumber, kVec3, kString };

const char* type_name(ArgType t) {
  switch (t) {
    case ArgType::kNumber: return "number";
    case ArgType::kVec3: return "vector (x y z)";
    case ArgType::kString: return "string";
  }
  return "?";
}

bool has_type(const Expr& e, ArgType t) {
  switch (t) {
    case ArgType::kNumber: return std::holds_alternative<double>(e.value);
    case ArgType::kVec3: return std::holds_alternative<Vec3>(e.value);
    case ArgType::kString: return std::holds_alternative<std::string>(e.value);
  }
  return false;
}

std::string describe_value(const Expr& e) {
  if (std::holds_alternative<double>(e.value)) return "number";
  if (std::holds_alternative<Vec3>(e.value)) return "vector";
  if (std::holds_alternative<std::string>(e.value)) return "string";
  return "shape (" + std::get<List>(e.value).head + ")";
}

// Argument schema for one head: keyword parameters, then leading positional
// values, then child shapes.
struct Schema {
  std::vector<std::pair<std::string, ArgType>> keywords;
  std::vector<ArgType> leading;
  std::size_t min_children = 0;
  std::size_t max_children = 0;
};

struct Args {
  std::map<std::string, const Expr*> keywords;
  std::vector<const Expr*> leading;
  std::vector<sdf::Shape> children;

  double num(const std::string& k) const { return std::get<double>(keywords.at(k)->value); }
  Vec3 vec(const std::string& k) const { return std::get<Vec3>(keywords.at(k)->value); }
};

constexpr std::size_t kMany = static_cast<std::size_t>(-1);

const std::map<std::string, Schema>& schemas() {
  using enum ArgType;
  static const std::map<std::string, Schema> kSchemas = {
      {"sphere", {{{"r", kNumber}}, {}, 0, 0}},
      {"box", {{{"size", kVec3}}, {}, 0, 0}},
      {"cylinder", {{{"r", kNumber}, {"h", kNumber}}, {}, 0, 0}},
      {"cone", {{{"r", kNumber}, {"h", kNumber}}, {}, 0, 0}},
      {"torus", {{{"R", kNumber}, {"r", kNumber}}, {}, 0, 0}},
      {"capsule", {{{"a", kVec3}, {"b", kVec3}, {"r", kNumber}}, {}, 0, 0}},
      {"tetrahedron", {{{"s", kNumber}}, {}, 0, 0}},
      {"plane", {{{"n", kVec3}, {"d", kNumber}}, {}, 0, 0}},
      {"union", {{}, {}, 2, kMany}},
      {"intersect", {{}, {}, 2, kMany}},
      {"difference", {{}, {}, 2, 2}},
      {"smooth-union", {{{"k", kNumber}}, {}, 2, kMany}},
      {"translate", {{}, {kVec3}, 1, 1}},
      {"rotate", {{{"axis", kVec3}, {"angle", kNumber}}, {}, 1, 1}},
      {"scale", {{}, {kNumber}, 1, 1}},
      {"text", {{{"h", kNumber}, {"stroke", kNumber}}, {kString}, 0, 0}},
  };
  return kSchemas;
}

class Builder {
 public:
  explicit Builder(const Lexer& lex) : lex_(lex) {}

  sdf::Shape build(const List& list) {
    const auto it = schemas().find(list.head);
    if (it == schemas().end())
      lex_.fail(list.head_offset, "shape name", "unknown identifier '" + list.head + "'");
    const Schema& schema = it->second;
    Args args = collect(list, schema);
    try {
      return construct(list.head, args);
    } catch (const ValidationError& e) {
      throw ValidationError(lex_.position(list.head_offset) + ": " + list.head +
                            ": " + e.what());
    } catch (const UnsupportedText& e) {
      throw ValidationError(lex_.position(list.head_offset) + ": " + list.head +
                            ": " + e.what());
    }
  }

 private:
  Args collect(const List& list, const Schema& schema) {
    Args args;
    for (const Expr& e : list.args) {
      if (e.keyword) {
        const auto& kws = schema.keywords;
        const auto k = std::find_if(kws.begin(), kws.end(),
                                    [&](const auto& p) { return p.first == *e.keyword; });
        if (k == kws.end())
          lex_.fail(e.offset, "keyword accepted by " + list.head,
                    "keyword :" + *e.keyword);
        if (args.keywords.count(*e.keyword))
          lex_.fail(e.offset, "each keyword once", "duplicate keyword :" + *e.keyword);
        if (!has_type(e, k->second))
          lex_.fail(e.offset, type_name(k->second) + std::string(" for :") + *e.keyword,
                    describe_value(e));
        args.keywords[*e.keyword] = &e;
        continue;
      }
      if (const auto* child = std::get_if<List>(&e.value)) {
        if (args.children.size() >= schema.max_children)
          lex_.fail(e.offset, "')' (" + list.head + " takes at most " +
                                  std::to_string(schema.max_children) + " shape arguments)",
                    describe_value(e));
        if (args.leading.size() < schema.leading.size())
          lex_.fail(e.offset, type_name(schema.leading[args.leading.size()]),
                    describe_value(e));
        args.children.push_back(build(*child));
        continue;
      }
      const std::size_t slot = args.leading.size();
      if (slot >= schema.leading.size() || !args.children.empty())
        lex_.fail(e.offset, schema.max_children > 0 ? "shape" : "keyword argument",
                  describe_value(e));
      if (!has_type(e, schema.leading[slot]))
        lex_.fail(e.offset, type_name(schema.leading[slot]), describe_value(e));
      args.leading.push_back(&e);
    }
    if (args.leading.size() < schema.leading.size())
      lex_.fail(list.close_offset, type_name(schema.leading[args.leading.size()]), "')'");
    for (const auto& [name, type] : schema.keywords) {
      if (!args.keywords.count(name))
        lex_.fail(list.close_offset, "keyword :" + name + " for " + list.head, "')'");
    }
    if (args.children.size() < schema.min_children)
      lex_.fail(list.close_offset,
                list.head + " with at least " + std::to_string(schema.min_children) +
                    " shape arguments",
                "')'");
    return args;
  }

  static sdf::Shape construct(const std::string& head, Args& a) {
    if (head == "sphere") return sdf::sphere(a.num("r"));
    if (head == "box") {
      const Vec3 size = a.vec("size");
      for (int i = 0; i < 3; ++i)
        if (!(size[i] > 0.0)) throw ValidationError("box size must be positive");
      return sdf::box(0.5 * size);
    }
    if (head == "cylinder") return sdf::cylinder(a.num("r"), a.num("h"));
    if (head == "cone") return sdf::cone(a.num("r"), a.num("h"));
    if (head == "torus") return sdf::torus(a.num("R"), a.num("r"));
    if (head == "capsule") return sdf::capsule(a.vec("a"), a.vec("b"), a.num("r"));
    if (head == "tetrahedron") return sdf::tetrahedron(a.num("s"));
    if (head == "plane") return sdf::plane(a.vec("n"), a.num("d"));
    if (head == "union") return sdf::union_of(std::move(a.children));
    if (head == "intersect") return sdf::intersection_of(std::move(a.children));
    if (head == "difference") return sdf::difference(a.children[0], a.children[1]);
    if (head == "smooth-union") return sdf::smooth_union(a.num("k"), std::move(a.children));
    if (head == "translate")
      return sdf::translate(std::get<Vec3>(a.leading[0]->value), a.children[0]);
    if (head == "rotate")
      return sdf::rotate(a.vec("axis"), a.num("angle"), a.children[0]);
    if (head == "scale")
      return sdf::scale(std::get<double>(a.leading[0]->value), a.children[0]);
    // text
    return sdf::text_shape(std::get<std::string>(a.leading[0]->value), a.num("h"),
                           a.num("stroke"));
  }

  const Lexer& lex_;
};

}  // namespace

sdf::Shape parse(std::string_view text) {
  Lexer lex(text);
  Reader reader(lex);
  const List root = reader.read_node();
  const Token& trailing = lex.peek();
  if (trailing.kind != TokenKind::kEnd)
    lex.fail(trailing.offset, "end of input", describe(trailing));
  return Builder(lex).build(root);
}

sdf::Shape parse(const SceneSource& source) { return parse(source.text); }

}  // namespace swarm::dsl
