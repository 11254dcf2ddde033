#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace vat::eval {

struct RetryPolicy {
  int max_retries = 3;  // extra attempts after the first
  std::chrono::milliseconds backoff_base{250};
};

/// Where and how to send chat-completion requests. The auth token is read
/// from the environment variable named by token_env at request time and is
/// never stored in the config.
struct EndpointConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model_name;
  std::string token_env;  // empty = no Authorization header
  int max_in_flight = 4;
  std::chrono::milliseconds timeout{120'000};
  RetryPolicy retry;
  double temperature = 0.0;

  void validate() const;
};

nlohmann::ordered_json endpoint_to_json(const EndpointConfig& c);
EndpointConfig endpoint_from_json(const nlohmann::json& j);

struct ChatReply {
  std::string content;
  std::string reasoning;  // empty when the endpoint has no reasoning field
  std::string raw_body;
};

/// Timeouts, connection failures, 429 and 5xx.
class TransientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reply that cannot be understood or a non-retryable HTTP status.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// One request, no retries.
  virtual ChatReply complete(const std::string& user_message) = 0;
};

/// OpenAI-style chat completions over HTTP(S): a single user turn in
/// "messages"; the reply is read from choices[0].message.content and, when
/// present, choices[0].message.reasoning_content (or .reasoning).
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(EndpointConfig config);
  ChatReply complete(const std::string& user_message) override;

 private:
  EndpointConfig config_;
};

using ClientFactory = std::function<std::unique_ptr<ChatClient>()>;

ClientFactory http_client_factory(const EndpointConfig& config);

nlohmann::ordered_json chat_request_body(const EndpointConfig& config, const std::string& user_message);

/// Parses a chat-completion response body. Throws ProtocolError.
ChatReply parse_chat_reply(const std::string& body);

struct AttemptLog {
  int attempt = 0;
  bool ok = false;
  std::string error;
  std::string content;
  std::string reasoning;
};

struct RetryOutcome {
  std::optional<ChatReply> reply;
  int attempts = 0;
  std::string error;  // last error when reply is empty
};

/// Calls client.complete until success, a ProtocolError, or the retry budget
/// is spent. Transient failures back off base * 2^k. `on_attempt` sees every
/// attempt before the caller inspects the reply.
RetryOutcome complete_with_retry(ChatClient& client, const std::string& message, const RetryPolicy& policy,
                                 const std::function<void(const AttemptLog&)>& on_attempt = {});

}  // namespace vat::eval
