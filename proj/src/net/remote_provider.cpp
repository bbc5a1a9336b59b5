#include "swarm/remote_provider.hpp"

#include <cstdlib>
#include <regex>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "swarm/errors.hpp"

namespace swarm::net {
namespace {

using nlohmann::json;

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

RemoteConfig RemoteConfig::from_env() {
  RemoteConfig c;
  c.api_key = env_or("LLM_API_KEY", "");
  if (c.api_key.empty()) throw ValidationError("LLM_API_KEY is not set");
  c.url = env_or("LLM_API_URL", c.url);
  c.model = env_or("LLM_MODEL", c.model);
  return c;
}

RemoteProvider::RemoteProvider(RemoteConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) throw ValidationError("remote provider needs an API key");
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, kUrl))
    throw ValidationError("unsupported LLM endpoint URL: " + config_.url);
  origin_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
}

std::string RemoteProvider::request_body(const std::string& system_prompt,
                                         const std::vector<orch::Turn>& history,
                                         const std::string& user) const {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", system_prompt}});
  for (const orch::Turn& t : history)
    messages.push_back(
        {{"role", t.role == orch::Role::kUser ? "user" : "assistant"}, {"content", t.text}});
  messages.push_back({{"role", "user"}, {"content", user}});
  const json body = {{"model", config_.model},
                     {"temperature", config_.temperature},
                     {"messages", std::move(messages)}};
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string RemoteProvider::generate(const std::string& system_prompt,
                                     const std::vector<orch::Turn>& history,
                                     const std::string& user) {
  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_bearer_token_auth(config_.api_key);

  const auto res =
      client.Post(path_, request_body(system_prompt, history, user), "application/json");
  if (!res) throw LlmUnavailable("request to " + origin_ + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw LlmUnavailable("LLM endpoint returned HTTP " + std::to_string(res->status));
  try {
    const json j = json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw LlmUnavailable(std::string("malformed LLM response: ") + e.what());
  }
}

}  // namespace swarm::net
