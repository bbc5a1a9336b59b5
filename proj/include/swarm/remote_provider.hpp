#pragma once

#include <string>
#include <vector>

#include "swarm/orchestrator.hpp"

namespace swarm::net {

struct RemoteConfig {
  std::string url = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
  std::string model = "gpt-4";
  double temperature = 0.0;
  int timeout_seconds = 60;

  // Reads LLM_API_KEY (required), LLM_API_URL and LLM_MODEL. Throws
  // ValidationError when the key is missing or empty.
  static RemoteConfig from_env();
};

// OpenAI-compatible chat completions client. The API key is sent only in the
// Authorization header and never appears in error messages.
class RemoteProvider : public orch::LlmProvider {
 public:
  explicit RemoteProvider(RemoteConfig config);

  std::string generate(const std::string& system_prompt, const std::vector<orch::Turn>& history,
                       const std::string& user) override;
  std::string tag() const override { return "remote"; }

  // Request body for one call, exposed for testing.
  std::string request_body(const std::string& system_prompt,
                           const std::vector<orch::Turn>& history,
                           const std::string& user) const;

 private:
  RemoteConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace swarm::net
