#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "vat/eval/chat_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace vat::eval {

void EndpointConfig::validate() const {
  if (base_url.empty()) throw std::invalid_argument("endpoint base_url is empty");
  if (model_name.empty()) throw std::invalid_argument("endpoint model_name is empty");
  if (max_in_flight < 1) throw std::invalid_argument("max_in_flight must be >= 1");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
  if (retry.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
}

nlohmann::ordered_json endpoint_to_json(const EndpointConfig& c) {
  nlohmann::ordered_json j;
  j["base_url"] = c.base_url;
  j["path"] = c.path;
  j["model_name"] = c.model_name;
  j["token_env"] = c.token_env;
  j["max_in_flight"] = c.max_in_flight;
  j["timeout_ms"] = c.timeout.count();
  j["max_retries"] = c.retry.max_retries;
  j["backoff_base_ms"] = c.retry.backoff_base.count();
  j["temperature"] = c.temperature;
  return j;
}

EndpointConfig endpoint_from_json(const nlohmann::json& j) {
  EndpointConfig c;
  c.base_url = j.value("base_url", "");
  c.path = j.value("path", c.path);
  c.model_name = j.value("model_name", "");
  c.token_env = j.value("token_env", "");
  c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", c.timeout.count()));
  c.retry.max_retries = j.value("max_retries", c.retry.max_retries);
  c.retry.backoff_base = std::chrono::milliseconds(j.value("backoff_base_ms", c.retry.backoff_base.count()));
  c.temperature = j.value("temperature", c.temperature);
  return c;
}

nlohmann::ordered_json chat_request_body(const EndpointConfig& config, const std::string& user_message) {
  nlohmann::ordered_json body;
  body["model"] = config.model_name;
  body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", user_message}}});
  body["temperature"] = config.temperature;
  return body;
}

ChatReply parse_chat_reply(const std::string& body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ProtocolError("reply is not JSON");
  try {
    const auto& msg = j.at("choices").at(0).at("message");
    ChatReply r;
    r.raw_body = body;
    if (msg.contains("content") && msg["content"].is_string()) r.content = msg["content"].get<std::string>();
    for (const char* key : {"reasoning_content", "reasoning"}) {
      if (msg.contains(key) && msg[key].is_string()) {
        r.reasoning = msg[key].get<std::string>();
        break;
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed chat reply: ") + e.what());
  }
}

HttpChatClient::HttpChatClient(EndpointConfig config) : config_(std::move(config)) { config_.validate(); }

ChatReply HttpChatClient::complete(const std::string& user_message) {
  httplib::Client cli(config_.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config_.token_env.empty()) {
    const char* token = std::getenv(config_.token_env.c_str());
    if (!token || !*token) throw ProtocolError("environment variable " + config_.token_env + " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  const auto res = cli.Post(config_.path, headers, chat_request_body(config_, user_message).dump(), "application/json");
  if (!res) throw TransientError("request failed: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500) throw TransientError("HTTP " + std::to_string(res->status));
  if (res->status != 200) throw ProtocolError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  return parse_chat_reply(res->body);
}

ClientFactory http_client_factory(const EndpointConfig& config) {
  return [config] { return std::make_unique<HttpChatClient>(config); };
}

RetryOutcome complete_with_retry(ChatClient& client, const std::string& message, const RetryPolicy& policy,
                                 const std::function<void(const AttemptLog&)>& on_attempt) {
  RetryOutcome out;
  for (int attempt = 1; attempt <= policy.max_retries + 1; ++attempt) {
    out.attempts = attempt;
    AttemptLog log{attempt, false, "", "", ""};
    try {
      ChatReply reply = client.complete(message);
      log.ok = true;
      log.content = reply.content;
      log.reasoning = reply.reasoning;
      if (on_attempt) on_attempt(log);
      out.reply = std::move(reply);
      out.error.clear();
      return out;
    } catch (const TransientError& e) {
      log.error = e.what();
      out.error = e.what();
      if (on_attempt) on_attempt(log);
    } catch (const ProtocolError& e) {
      log.error = e.what();
      out.error = e.what();
      if (on_attempt) on_attempt(log);
      return out;
    }
    if (attempt <= policy.max_retries) std::this_thread::sleep_for(policy.backoff_base * (1 << std::min(attempt - 1, 10)));
  }
  return out;
}

}  // namespace vat::eval
