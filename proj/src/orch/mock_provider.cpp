#include <algorithm>
#include <cctype>

#include "swarm/orchestrator.hpp"

namespace swarm::orch {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

MockProvider::MockProvider(std::string fallback) : fallback_(std::move(fallback)) {}

MockProvider& MockProvider::on(std::string needle, std::string response) {
  rules_.emplace_back(lower(std::move(needle)), std::move(response));
  return *this;
}

std::string MockProvider::generate(const std::string&, const std::vector<Turn>&,
                                   const std::string& user) {
  const std::string text = lower(user);
  for (const auto& [needle, response] : rules_)
    if (text.find(needle) != std::string::npos) return response;
  return fallback_;
}

std::shared_ptr<MockProvider> MockProvider::with_defaults() {
  auto p = std::make_shared<MockProvider>("I can draw spheres, cubes, cones, pyramids and more.");
  p->on("sphere", "Here is a sphere.\n```\n(sphere :r 1)\n```")
      .on("ball", "Here is a ball.\n```\n(sphere :r 1)\n```")
      .on("cube", "A cube.\n```\n(box :size (1.5 1.5 1.5))\n```")
      .on("cone", "A cone.\n```\n(cone :r 0.8 :h 1.6)\n```")
      .on("cylinder", "A cylinder.\n```\n(cylinder :r 0.7 :h 1.5)\n```")
      .on("pyramid", "A pyramid.\n```\n(tetrahedron :s 1.8)\n```")
      .on("donut", "A donut.\n```\n(torus :R 1 :r 0.3)\n```")
      .on("hello", "Hello there!");
  return p;
}

}  // namespace swarm::orch
