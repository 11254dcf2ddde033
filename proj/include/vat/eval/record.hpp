#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vat/eval/prompt.hpp"
#include "vat/instance.hpp"

namespace vat::eval {

enum class JudgeLabel { Permutation, Elimination, Invalid };

std::string_view to_string(JudgeLabel l);  // "PERMUTATION", ...
std::optional<JudgeLabel> judge_label_from_string(std::string_view s);

enum class RecordStatus { Ok, Failed };

/// One model response to one prompt, with grading and judging results.
struct EvalRecord {
  std::string instance_id;
  std::string model_name;
  PromptMode mode = PromptMode::Reasoning;
  std::string template_version;
  std::string prompt;
  std::string response_text;
  std::string reasoning_text;
  /// Unicode code points in reasoning_text + response_text.
  std::size_t char_count_total = 0;
  std::optional<Pair> parsed_answer;  // empty = unparseable
  bool correct = false;
  std::optional<JudgeLabel> judge_label;  // empty = unjudged
  bool judge_flagged = false;             // verdict could not be parsed
  std::string judge_model;
  RecordStatus status = RecordStatus::Ok;
  std::string error;
  int attempt_count = 0;
  double temperature = 0.0;
  std::string started_at;
  std::string finished_at;
};

/// Number of Unicode code points in a UTF-8 string.
std::size_t char_count(std::string_view utf8);

/// Last "ANSWER: (Vi, Vj)" in the text, case-insensitive, any index order.
/// Empty when absent, indices coincide or an index is >= n_vars.
std::optional<Pair> parse_answer(std::string_view response_text, int n_vars);

class GradeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// True iff the parsed answer equals the truth pair. Throws GradeMismatch if
/// the record belongs to another instance.
bool grade(const EvalRecord& record, const VatInstance& inst);

/// Sets char count, parsed answer and correctness from the texts.
void finalize_record(EvalRecord& record, const VatInstance& inst);

nlohmann::ordered_json record_to_json(const EvalRecord& r);
EvalRecord record_from_json(const nlohmann::json& j);

std::string utc_timestamp();

}  // namespace vat::eval
