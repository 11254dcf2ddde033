#include "vat/eval/record.hpp"

#include <chrono>
#include <ctime>
#include <regex>

namespace vat::eval {

std::string_view to_string(JudgeLabel l) {
  switch (l) {
    case JudgeLabel::Permutation: return "PERMUTATION";
    case JudgeLabel::Elimination: return "ELIMINATION";
    case JudgeLabel::Invalid: return "INVALID";
  }
  return "INVALID";
}

std::optional<JudgeLabel> judge_label_from_string(std::string_view s) {
  if (s == "PERMUTATION") return JudgeLabel::Permutation;
  if (s == "ELIMINATION") return JudgeLabel::Elimination;
  if (s == "INVALID") return JudgeLabel::Invalid;
  return std::nullopt;
}

std::size_t char_count(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::optional<Pair> parse_answer(std::string_view response_text, int n_vars) {
  static const std::regex answer_re(R"(answer\s*:\s*\(\s*v\s*(\d{1,6})\s*,\s*v\s*(\d{1,6})\s*\))", std::regex::icase);
  const std::string text(response_text);
  std::optional<std::smatch> last;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), answer_re); it != std::sregex_iterator(); ++it)
    last = *it;
  if (!last) return std::nullopt;
  const int i = std::stoi((*last)[1].str());
  const int j = std::stoi((*last)[2].str());
  if (i == j || i >= n_vars || j >= n_vars) return std::nullopt;
  return Pair(i, j);
}

bool grade(const EvalRecord& record, const VatInstance& inst) {
  if (record.instance_id != inst.instance_id)
    throw GradeMismatch("record " + record.instance_id + " graded against instance " + inst.instance_id);
  return record.parsed_answer.has_value() && *record.parsed_answer == inst.truth_pair;
}

void finalize_record(EvalRecord& record, const VatInstance& inst) {
  record.char_count_total = char_count(record.reasoning_text) + char_count(record.response_text);
  record.parsed_answer = parse_answer(record.response_text, inst.n_vars);
  record.correct = grade(record, inst);
}

nlohmann::ordered_json record_to_json(const EvalRecord& r) {
  nlohmann::ordered_json j;
  j["instance_id"] = r.instance_id;
  j["model_name"] = r.model_name;
  j["mode"] = std::string(to_string(r.mode));
  j["template_version"] = r.template_version;
  j["prompt"] = r.prompt;
  j["response_text"] = r.response_text;
  j["reasoning_text"] = r.reasoning_text;
  j["char_count_total"] = r.char_count_total;
  if (r.parsed_answer)
    j["parsed_answer"] = {r.parsed_answer->first, r.parsed_answer->second};
  else
    j["parsed_answer"] = nullptr;
  j["correct"] = r.correct;
  j["judge_label"] = r.judge_label ? std::string(to_string(*r.judge_label)) : std::string("UNJUDGED");
  j["judge_flagged"] = r.judge_flagged;
  j["judge_model"] = r.judge_model;
  j["status"] = r.status == RecordStatus::Ok ? "ok" : "failed";
  j["error"] = r.error;
  j["attempt_count"] = r.attempt_count;
  j["temperature"] = r.temperature;
  j["started_at"] = r.started_at;
  j["finished_at"] = r.finished_at;
  return j;
}

EvalRecord record_from_json(const nlohmann::json& j) {
  EvalRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.model_name = j.value("model_name", "");
  r.mode = prompt_mode_from_string(j.value("mode", "reasoning"));
  r.template_version = j.value("template_version", "");
  r.prompt = j.value("prompt", "");
  r.response_text = j.value("response_text", "");
  r.reasoning_text = j.value("reasoning_text", "");
  r.char_count_total = j.value("char_count_total", std::size_t{0});
  if (j.contains("parsed_answer") && j["parsed_answer"].is_array() && j["parsed_answer"].size() == 2)
    r.parsed_answer = Pair(j["parsed_answer"][0].get<int>(), j["parsed_answer"][1].get<int>());
  r.correct = j.value("correct", false);
  r.judge_label = judge_label_from_string(j.value("judge_label", "UNJUDGED"));
  r.judge_flagged = j.value("judge_flagged", false);
  r.judge_model = j.value("judge_model", "");
  r.status = j.value("status", "ok") == "ok" ? RecordStatus::Ok : RecordStatus::Failed;
  r.error = j.value("error", "");
  r.attempt_count = j.value("attempt_count", 0);
  r.temperature = j.value("temperature", 0.0);
  r.started_at = j.value("started_at", "");
  r.finished_at = j.value("finished_at", "");
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

}  // namespace vat::eval
