#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "vat/eval/chat_client.hpp"

namespace httplib {
class Server;
}

namespace vat::eval {

struct MockReply {
  int status = 200;
  std::string content;
  std::string reasoning;  // sent as reasoning_content when non-empty
  int delay_ms = 0;
  bool malformed = false;  // body that is not a chat completion
};

/// (user message, 0-based request index) -> reply.
using MockResponder = std::function<MockReply(const std::string& prompt, int request_index)>;

/// Chat-completion endpoint on 127.0.0.1 with an ephemeral port. Speaks the
/// same wire format HttpChatClient expects.
class MockChatServer {
 public:
  explicit MockChatServer(MockResponder responder);
  ~MockChatServer();
  MockChatServer(const MockChatServer&) = delete;
  MockChatServer& operator=(const MockChatServer&) = delete;

  int port() const { return port_; }
  std::string base_url() const;
  int requests() const { return requests_.load(); }

  /// Endpoint config pointing at this server.
  EndpointConfig endpoint(const std::string& model_name) const;

 private:
  std::unique_ptr<httplib::Server> server_;
  MockResponder responder_;
  std::atomic<int> requests_{0};
  int port_ = 0;
  std::thread thread_;
};

struct OracleOptions {
  /// Answer a wrong pair on instances of this function id (0 = never).
  int wrong_on_function = 0;
  /// Responses for N >= this narrate elimination, below it permutation.
  int elimination_from_n = 6;
};

/// Solves the task embedded in the prompt and answers in the required format.
MockResponder oracle_responder(OracleOptions options = {});

/// Judge that reads the text between the reasoning tags and names the
/// strategy it describes.
MockResponder keyword_judge_responder();

/// Always replies `content`.
MockResponder fixed_responder(std::string content, std::string reasoning = "");

}  // namespace vat::eval
