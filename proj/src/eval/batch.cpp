#include "vat/eval/batch.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace vat::eval {

namespace {

const char* kJudgeBody = R"(You are classifying the problem-solving strategy used in a response to a variable attribution task. The solver had to find which two of several binary variables determine an output Y through a known logical rule, given a table of trials.

Strategies:
- PERMUTATION: the solver takes candidate pairs one at a time and checks each pair against the trials until a pair fits.
- ELIMINATION: the solver goes through the trials one at a time and removes every pair (or variable) that the trial rules out, keeping a shrinking set of remaining candidates.
- INVALID: neither strategy can be identified (no systematic search, guessing, or the response is empty or incoherent).

Solver reasoning:
<reasoning>
{{reasoning}}
</reasoning>

Solver final output:
<response>
{{response}}
</response>

Give a one-sentence justification, then on the last line output exactly one word: PERMUTATION, ELIMINATION or INVALID.)";

std::string trim_verdict(std::string_view s) {
  auto keep = [](char c) { return !(c == ' ' || c == '\t' || c == '\r' || c == '*' || c == '_' || c == '`' || c == '.' || c == '#'); };
  while (!s.empty() && !keep(s.front())) s.remove_prefix(1);
  while (!s.empty() && !keep(s.back())) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(body);
  body();
}

std::vector<EvalRecord> run_batch(std::span<const PromptRendering> prompts, std::span<const VatInstance> instances,
                                  const ClientFactory& clients, const EndpointConfig& config, TranscriptLog& log) {
  config.validate();
  if (prompts.size() != instances.size()) throw std::invalid_argument("run_batch: one instance per prompt");
  std::vector<EvalRecord> records(prompts.size());

  parallel_for(prompts.size(), config.max_in_flight, [&](std::size_t i) {
    const auto& prompt = prompts[i];
    const auto& inst = instances[i];
    auto client = clients();

    EvalRecord r;
    r.instance_id = prompt.instance_id;
    r.model_name = config.model_name;
    r.mode = prompt.mode;
    r.template_version = prompt.template_version;
    r.prompt = prompt.text;
    r.temperature = config.temperature;
    r.started_at = utc_timestamp();

    const auto outcome = complete_with_retry(*client, prompt.text, config.retry, [&](const AttemptLog& a) {
      nlohmann::ordered_json entry;
      entry["kind"] = "attempt";
      entry["instance_id"] = r.instance_id;
      entry["model_name"] = r.model_name;
      entry["attempt"] = a.attempt;
      entry["ok"] = a.ok;
      entry["error"] = a.error;
      entry["response_text"] = a.content;
      entry["reasoning_text"] = a.reasoning;
      entry["at"] = utc_timestamp();
      log.append(entry);
    });

    r.attempt_count = outcome.attempts;
    r.finished_at = utc_timestamp();
    if (outcome.reply) {
      r.response_text = outcome.reply->content;
      r.reasoning_text = outcome.reply->reasoning;
    } else {
      r.status = RecordStatus::Failed;
      r.error = outcome.error;
    }
    if (r.instance_id != inst.instance_id) throw GradeMismatch("prompt/instance order mismatch at " + r.instance_id);
    finalize_record(r, inst);
    log.append_record(r);
    records[i] = std::move(r);
  });
  return records;
}

JudgeTemplate JudgeTemplate::standard() { return {"vat-judge-v1", kJudgeBody}; }

std::optional<JudgeLabel> parse_verdict(std::string_view reply) {
  std::string_view last;
  std::size_t pos = 0;
  while (pos <= reply.size()) {
    const auto nl = reply.find('\n', pos);
    const auto line = reply.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!trim_verdict(line).empty()) last = line;
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return judge_label_from_string(trim_verdict(last));
}

std::string render_judge_prompt(const EvalRecord& record, const JudgeTemplate& tmpl) {
  return fill_template(tmpl.body,
                       {{"reasoning", record.reasoning_text.empty() ? "(none)" : record.reasoning_text},
                        {"response", record.response_text}},
                       {"reasoning", "response"});
}

JudgeOutcome judge_strategy(const EvalRecord& record, ChatClient& judge, const EndpointConfig& judge_config,
                            const JudgeTemplate& tmpl) {
  JudgeOutcome out;
  const auto outcome = complete_with_retry(judge, render_judge_prompt(record, tmpl), judge_config.retry);
  if (!outcome.reply) {
    out.failed = true;
    out.flagged = true;
    out.error = outcome.error;
    return out;
  }
  if (auto label = parse_verdict(outcome.reply->content)) {
    out.label = *label;
  } else {
    out.label = JudgeLabel::Invalid;
    out.flagged = true;
  }
  return out;
}

std::vector<EvalRecord> judge_batch(std::span<const EvalRecord> records, const ClientFactory& judges,
                                    const EndpointConfig& judge_config, const JudgeTemplate& tmpl, TranscriptLog& log) {
  judge_config.validate();
  std::vector<EvalRecord> out(records.begin(), records.end());
  parallel_for(out.size(), judge_config.max_in_flight, [&](std::size_t i) {
    auto& r = out[i];
    if (r.status != RecordStatus::Ok) return;
    auto client = judges();
    const auto verdict = judge_strategy(r, *client, judge_config, tmpl);
    if (verdict.failed) {
      r.judge_label.reset();
      r.judge_flagged = true;
      r.error = "judge: " + verdict.error;
    } else {
      r.judge_label = verdict.label;
      r.judge_flagged = verdict.flagged;
    }
    r.judge_model = judge_config.model_name;
    log.append_record(r);
  });
  return out;
}

}  // namespace vat::eval
