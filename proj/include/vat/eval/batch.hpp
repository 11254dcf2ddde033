#pragma once

#include <span>
#include <string>
#include <vector>

#include "vat/eval/chat_client.hpp"
#include "vat/eval/prompt.hpp"
#include "vat/eval/record.hpp"
#include "vat/eval/transcript.hpp"
#include "vat/instance.hpp"

namespace vat::eval {

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Sends every prompt with at most config.max_in_flight requests in flight,
/// retrying transient failures. Each attempt is logged as an "attempt" entry
/// before the reply is parsed; the graded record is logged afterwards.
/// Failed prompts yield a record with status Failed; the batch continues.
///
/// `instances[i]` must be the instance `prompts[i]` was rendered from.
/// Records come back in prompt order.
std::vector<EvalRecord> run_batch(std::span<const PromptRendering> prompts, std::span<const VatInstance> instances,
                                  const ClientFactory& clients, const EndpointConfig& config, TranscriptLog& log);

/// Judge prompt with {{reasoning}} and {{response}} slots.
struct JudgeTemplate {
  std::string version;
  std::string body;

  static JudgeTemplate standard();
};

struct JudgeOutcome {
  JudgeLabel label = JudgeLabel::Invalid;
  bool flagged = false;  // no verdict token found
  bool failed = false;   // endpoint never answered
  std::string error;
};

/// The verdict is the last non-empty line of the reply, trimmed of spaces and
/// markdown emphasis, when it equals PERMUTATION, ELIMINATION or INVALID.
std::optional<JudgeLabel> parse_verdict(std::string_view judge_reply);

std::string render_judge_prompt(const EvalRecord& record, const JudgeTemplate& tmpl);

/// Asks the judge endpoint for a strategy label. An unparseable verdict is
/// reported as Invalid with `flagged` set.
JudgeOutcome judge_strategy(const EvalRecord& record, ChatClient& judge, const EndpointConfig& judge_config,
                            const JudgeTemplate& tmpl);

/// Judges every successful record concurrently and appends the updated
/// records to `log`. Returns the updated records in input order.
std::vector<EvalRecord> judge_batch(std::span<const EvalRecord> records, const ClientFactory& judges,
                                    const EndpointConfig& judge_config, const JudgeTemplate& tmpl, TranscriptLog& log);

}  // namespace vat::eval
