#include <sstream>

#include "swarm/dsl.hpp"
#include "swarm/errors.hpp"
#include "swarm/orchestrator.hpp"

namespace swarm::orch {
namespace {

class BusyGuard {
 public:
  explicit BusyGuard(std::atomic<bool>& flag) : flag_(flag) {
    bool expected = false;
    if (!flag_.compare_exchange_strong(expected, true))
      throw Busy();
  }
  ~BusyGuard() { flag_.store(false); }
  BusyGuard(const BusyGuard&) = delete;
  BusyGuard& operator=(const BusyGuard&) = delete;

 private:
  std::atomic<bool>& flag_;
};

CommandOutcome failure(std::string reply, std::string code, std::string message,
                       std::optional<std::string> raw_code) {
  CommandOutcome o;
  o.reply = std::move(reply);
  o.error_code = std::move(code);
  o.error = std::move(message);
  o.raw_code = std::move(raw_code);
  return o;
}

}  // namespace

Session::Session(std::string id, std::shared_ptr<LlmProvider> provider, SessionConfig config,
                 TargetSink sink)
    : id_(std::move(id)),
      provider_(std::move(provider)),
      config_(std::move(config)),
      sink_(std::move(sink)),
      system_prompt_(build_system_prompt()) {
  if (!provider_) throw ValidationError("session needs a provider");
  if (config_.drones == 0) throw ValidationError("session needs at least one drone");
}

CommandOutcome Session::submit_command(const std::string& text) { return converse(text); }

CommandOutcome Session::refine(const std::string& text) {
  std::string current;
  {
    std::lock_guard lock(mu_);
    if (!scene_) throw ValidationError("there is no scene to refine yet");
    current = dsl::print_canonical(*scene_);
  }
  std::ostringstream msg;
  msg << "Current scene:\n```\n" << current << "\n```\n"
      << "Change it as follows and reply with the complete new scene, not a diff: " << text;
  return converse(msg.str());
}

CommandOutcome Session::apply_dsl(const std::string& code) {
  BusyGuard guard(busy_);
  std::optional<sdf::Shape> shape;
  try {
    shape = dsl::parse(dsl::SceneSource{code, dsl::Origin::kUserDirect});
  } catch (const ParseError& e) {
    return failure("", "parse_error", e.what(), code);
  } catch (const ValidationError& e) {
    return failure("", "validation_error", e.what(), code);
  }
  return adopt(*shape, "Scene updated.");
}

CommandOutcome Session::converse(const std::string& message) {
  BusyGuard guard(busy_);
  std::vector<Turn> prior;
  bool sky = false;
  {
    std::lock_guard lock(mu_);
    prior = history_;
    sky = config_.sky_text;
  }

  std::string raw;
  try {
    raw = provider_->generate(system_prompt_, prior, message);
  } catch (const LlmUnavailable&) {
    throw;
  } catch (const std::exception& e) {
    throw LlmUnavailable(e.what());
  }
  {
    std::lock_guard lock(mu_);
    history_.push_back({Role::kUser, message});
    history_.push_back({Role::kAssistant, raw});
  }

  dsl::SceneSource source;
  try {
    source = dsl::extract_code(raw);
  } catch (const NoCodeFound&) {
    CommandOutcome chat;
    chat.reply = raw;
    if (!sky) return chat;
    // Sky-text: spell the first word the glyph set can draw.
    std::istringstream words(raw);
    for (std::string word; words >> word;) {
      try {
        const sdf::Shape text =
            sdf::text_shape(word, config_.sky_text_height, config_.sky_text_stroke);
        return adopt(text, raw);
      } catch (const UnsupportedText&) {
      }
    }
    return chat;
  }

  try {
    return adopt(dsl::parse(source), raw);
  } catch (const ParseError& e) {
    return failure(raw, "parse_error", e.what(), source.text);
  } catch (const ValidationError& e) {
    return failure(raw, "validation_error", e.what(), source.text);
  }
}

CommandOutcome Session::adopt(const sdf::Shape& shape, std::string reply) {
  dist::PipelineOptions options = config_.pipeline;
  options.seed = config_.seed;
  PointCloud targets;
  try {
    targets = dist::generate_targets(shape, config_.drones, options);
  } catch (const SamplingFailed& e) {
    return failure(std::move(reply), "sampling_failed", e.what(), dsl::print_canonical(shape));
  }
  {
    std::lock_guard lock(mu_);
    scene_ = shape;
    targets_ = targets;
  }
  if (sink_) sink_(targets);

  CommandOutcome o;
  o.reply = std::move(reply);
  o.scene = shape;
  o.targets = std::move(targets);
  return o;
}

void Session::set_sky_text(bool on) {
  std::lock_guard lock(mu_);
  config_.sky_text = on;
}

bool Session::sky_text() const {
  std::lock_guard lock(mu_);
  return config_.sky_text;
}

std::vector<Turn> Session::history() const {
  std::lock_guard lock(mu_);
  return history_;
}

std::optional<sdf::Shape> Session::scene() const {
  std::lock_guard lock(mu_);
  return scene_;
}

PointCloud Session::targets() const {
  std::lock_guard lock(mu_);
  return targets_;
}

}  // namespace swarm::orch
