#include <cctype>
#include <regex>
#include <string>
#include <vector>

#include "swarm/dsl.hpp"
#include "swarm/errors.hpp"

namespace swarm::dsl {
namespace {

// End (one past the closing paren) of the "(...)" span opening at `start`,
// skipping string literals and comments; npos when it never closes.
std::size_t span_end(std::string_view text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == ';') {
      while (i + 1 < text.size() && text[i + 1] != '\n') ++i;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

// First "(" outside a comment, or npos.
std::size_t first_open(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ';') {
      while (i + 1 < text.size() && text[i + 1] != '\n') ++i;
    } else if (text[i] == '(') {
      return i;
    }
  }
  return std::string_view::npos;
}

// Longest balanced "(...)" span in `text`. Returns an empty view when there
// is none.
std::string_view longest_balanced(std::string_view text) {
  std::string_view best;
  for (std::size_t start = 0; start < text.size(); ++start) {
    if (text[start] != '(') continue;
    const std::size_t end = span_end(text, start);
    if (end != std::string_view::npos && end - start > best.size())
      best = text.substr(start, end - start);
  }
  return best;
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

SceneSource extract_code(std::string_view raw) {
  static const std::regex kFence(R"(```[^\n`]*\n([\s\S]*?)```)");
  const std::string text(raw);

  std::vector<std::string> blocks;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kFence);
       it != std::sregex_iterator(); ++it) {
    blocks.push_back((*it)[1].str());
  }
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    const std::string_view block = *it;
    // A fenced form that never closes goes to the parser whole, so the error
    // points at the real problem instead of some inner balanced fragment.
    const std::size_t open = first_open(block);
    if (open != std::string_view::npos && span_end(block, open) == std::string_view::npos)
      return {std::string(trim_right(block.substr(open))), Origin::kLlmExtracted};
    const std::string_view code = longest_balanced(block);
    if (!code.empty()) return {std::string(code), Origin::kLlmExtracted};
  }
  const std::string_view code = longest_balanced(text);
  if (code.empty()) throw NoCodeFound();
  return {std::string(code), Origin::kLlmExtracted};
}

}  // namespace swarm::dsl
