#include "vat/eval/mock_server.hpp"

#include <httplib.h>

#include <chrono>
#include <regex>
#include <sstream>

#include "vat/eval/prompt.hpp"
#include "vat/solvers.hpp"

namespace vat::eval {

MockChatServer::MockChatServer(MockResponder responder)
    : server_(std::make_unique<httplib::Server>()), responder_(std::move(responder)) {
  server_->Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    const int index = requests_++;
    std::string prompt;
    std::string model = "mock";
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (!body.is_discarded()) {
      model = body.value("model", model);
      if (body.contains("messages") && body["messages"].is_array() && !body["messages"].empty())
        prompt = body["messages"].back().value("content", "");
    }
    const MockReply reply = responder_(prompt, index);
    if (reply.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(reply.delay_ms));
    res.status = reply.status;
    if (reply.malformed) {
      res.set_content("{\"unexpected\": true}", "application/json");
      return;
    }
    if (reply.status != 200) {
      res.set_content("{\"error\": \"scripted failure\"}", "application/json");
      return;
    }
    nlohmann::ordered_json message{{"role", "assistant"}, {"content", reply.content}};
    if (!reply.reasoning.empty()) message["reasoning_content"] = reply.reasoning;
    nlohmann::ordered_json out{{"id", "mock-" + std::to_string(index)},
                               {"object", "chat.completion"},
                               {"model", model},
                               {"choices", nlohmann::ordered_json::array({{{"index", 0},
                                                                           {"message", message},
                                                                           {"finish_reason", "stop"}}})}};
    res.set_content(out.dump(), "application/json");
  });
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("mock server could not bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockChatServer::~MockChatServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockChatServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

EndpointConfig MockChatServer::endpoint(const std::string& model_name) const {
  EndpointConfig c;
  c.base_url = base_url();
  c.model_name = model_name;
  c.timeout = std::chrono::milliseconds(10'000);
  c.retry.backoff_base = std::chrono::milliseconds(1);
  return c;
}

namespace {

std::string name(const Pair& p) { return "(V" + std::to_string(p.first) + ", V" + std::to_string(p.second) + ")"; }

std::string elimination_narrative(const PromptContent& task, const logic::BooleanFunction& f) {
  const auto trace = solve::solve_elimination(task.design, task.outputs, f);
  std::ostringstream os;
  os << "I start with all " << trace.initial_pairs
     << " candidate pairs and eliminate every pair that contradicts a trial.\n";
  for (std::size_t t = 0; t < trace.surviving_counts.size(); ++t)
    os << "After trial " << t + 1 << ", " << trace.surviving_counts[t] << " pairs remain.\n";
  os << "Only " << name(trace.predicted_pair) << " remains.";
  return os.str();
}

std::string permutation_narrative(const PromptContent& task, const logic::BooleanFunction& f) {
  const auto trace = solve::solve_permutation(task.design, task.outputs, f);
  std::ostringstream os;
  os << "I test candidate pairs one at a time against all trials.\n";
  os << "Checked " << trace.resolved_at << " pairs that failed before reaching " << name(trace.predicted_pair)
     << ", which fits every trial.";
  return os.str();
}

Pair wrong_pair(const Pair& truth) { return truth == Pair(0, 1) ? Pair(0, 2) : Pair(0, 1); }

}  // namespace

MockResponder oracle_responder(OracleOptions options) {
  return [options](const std::string& prompt, int) {
    MockReply reply;
    const auto task = parse_prompt_content(prompt);
    if (!task) {
      reply.content = "I could not read the task.";
      return reply;
    }
    const auto& f = logic::function_by_id(task->function_id);
    const auto pairs = gen::check_consistent_pairs(task->design, task->outputs, f);
    if (pairs.size() != 1) {
      reply.content = "The trials do not identify a single pair.";
      return reply;
    }
    Pair answer = pairs.front();
    const bool eliminate = static_cast<int>(task->design.vars()) >= options.elimination_from_n;
    reply.reasoning = eliminate ? elimination_narrative(*task, f) : permutation_narrative(*task, f);
    if (options.wrong_on_function != 0 && task->function_id == options.wrong_on_function) answer = wrong_pair(answer);
    reply.content = format_answer(answer);
    return reply;
  };
}

MockResponder keyword_judge_responder() {
  return [](const std::string& prompt, int) {
    MockReply reply;
    const auto open = prompt.find("<reasoning>");
    const auto close = prompt.rfind("</reasoning>");
    std::string reasoning;
    if (open != std::string::npos && close != std::string::npos && close > open)
      reasoning = prompt.substr(open + 11, close - open - 11);
    static const std::regex elim(R"(eliminat|remain)", std::regex::icase);
    static const std::regex perm(R"(one at a time|candidate pair|test(ing)? pair)", std::regex::icase);
    std::string label = "INVALID";
    if (std::regex_search(reasoning, elim))
      label = "ELIMINATION";
    else if (std::regex_search(reasoning, perm))
      label = "PERMUTATION";
    reply.content = "Classification based on the described search.\n" + label;
    return reply;
  };
}

MockResponder fixed_responder(std::string content, std::string reasoning) {
  return [content = std::move(content), reasoning = std::move(reasoning)](const std::string&, int) {
    return MockReply{200, content, reasoning, 0, false};
  };
}

}  // namespace vat::eval
