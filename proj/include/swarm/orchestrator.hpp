#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swarm/distribution.hpp"
#include "swarm/sdf.hpp"

namespace swarm::orch {

enum class Role { kUser, kAssistant };

struct Turn {
  Role role;
  std::string text;
};

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  // Raw model output for `user` given the prior turns. Implementations throw
  // on transport or service failure; the session maps that to LlmUnavailable.
  virtual std::string generate(const std::string& system_prompt, const std::vector<Turn>& history,
                               const std::string& user) = 0;
  virtual std::string tag() const = 0;
};

// Canned responses keyed by case-insensitive substrings of the user message.
// The first matching rule wins; otherwise the fallback is returned.
class MockProvider : public LlmProvider {
 public:
  explicit MockProvider(std::string fallback = "I can only help with shapes.");
  MockProvider& on(std::string needle, std::string response);

  std::string generate(const std::string& system_prompt, const std::vector<Turn>& history,
                       const std::string& user) override;
  std::string tag() const override { return "mock"; }

  // A provider preloaded with replies for the common primitives.
  static std::shared_ptr<MockProvider> with_defaults();

 private:
  std::vector<std::pair<std::string, std::string>> rules_;
  std::string fallback_;
};

std::string build_system_prompt();

struct CommandOutcome {
  std::string reply;
  std::optional<sdf::Shape> scene;
  std::optional<PointCloud> targets;
  std::optional<std::string> error;  // message when the command failed
  std::string error_code;            // "parse_error", "validation_error", "sampling_failed"
  std::optional<std::string> raw_code;

  bool ok() const { return !error.has_value(); }
};

struct SessionConfig {
  std::size_t drones = 64;
  std::uint64_t seed = 0;
  bool sky_text = false;
  double sky_text_height = 1.5;
  double sky_text_stroke = 0.05;
  dist::PipelineOptions pipeline;  // its seed is overridden by `seed`
};

// One conversation driving one swarm. The target sink is invoked with each
// new target set after the session state has been swapped.
class Session {
 public:
  using TargetSink = std::function<void(const PointCloud&)>;

  Session(std::string id, std::shared_ptr<LlmProvider> provider, SessionConfig config,
          TargetSink sink = {});

  // Throw LlmUnavailable (state and history untouched) or Busy. Parse and
  // validation failures come back in the outcome with the code attached.
  CommandOutcome submit_command(const std::string& text);
  CommandOutcome refine(const std::string& text);
  // Scene code straight from the user, no model involved.
  CommandOutcome apply_dsl(const std::string& code);

  void set_sky_text(bool on);
  bool sky_text() const;
  bool busy() const { return busy_.load(); }

  const std::string& id() const { return id_; }
  std::vector<Turn> history() const;
  std::optional<sdf::Shape> scene() const;
  PointCloud targets() const;

 private:
  CommandOutcome converse(const std::string& message);
  CommandOutcome adopt(const sdf::Shape& shape, std::string reply);

  std::string id_;
  std::shared_ptr<LlmProvider> provider_;
  SessionConfig config_;
  TargetSink sink_;
  std::string system_prompt_;

  mutable std::mutex mu_;
  std::vector<Turn> history_;
  std::optional<sdf::Shape> scene_;
  PointCloud targets_;
  std::atomic<bool> busy_{false};
};

}  // namespace swarm::orch
