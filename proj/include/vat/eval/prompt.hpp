#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vat/instance.hpp"

namespace vat::eval {

enum class PromptMode { Reasoning, DirectAnswer };

std::string_view to_string(PromptMode m);
PromptMode prompt_mode_from_string(std::string_view s);

/// Prompt body with {{slot}} placeholders. Required slots: variables,
/// trials, function, answer_format. Optional: n_vars, n_trials.
struct PromptTemplate {
  std::string version;
  std::string body;

  static PromptTemplate standard();
};

struct PromptRendering {
  std::string instance_id;
  PromptMode mode = PromptMode::Reasoning;
  std::string text;
  std::string template_version;
};

class TemplateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Appended in direct-answer mode.
inline constexpr std::string_view kDirectAnswerClause =
    "Respond with only the final ANSWER line. Do not show any reasoning or intermediate steps.";

PromptRendering render_prompt(const VatInstance& inst, PromptMode mode, const PromptTemplate& tmpl);

/// The answer line a correct response ends with, e.g. "ANSWER: (V0, V3)".
std::string format_answer(const Pair& p);

/// The task content recovered from a rendered prompt: trial rows and the
/// truth table lines. Used by scripted endpoints.
struct PromptContent {
  Design design;
  Bits outputs;
  int function_id = 0;
};

std::optional<PromptContent> parse_prompt_content(std::string_view text);

/// Fills {{name}} slots. Throws TemplateError if a slot in `required` is
/// absent from the template or a placeholder has no value.
std::string fill_template(std::string_view body, const std::vector<std::pair<std::string, std::string>>& values,
                          std::initializer_list<std::string_view> required);

}  // namespace vat::eval
