#include "vat/eval/prompt.hpp"

#include <regex>
#include <sstream>

namespace vat::eval {

namespace {

constexpr const char* kArrow = "\xE2\x86\x92";  // U+2192

const char* kStandardBody = R"(Variable attribution task.

You are given {{n_vars}} candidate binary variables: {{variables}}.
Exactly two of them are active. In every trial the output Y is produced by applying a known logical rule to the two active variables. The other variables have no influence on Y.

{{function}}

Observed trials ({{n_trials}} in total):
{{trials}}

Determine which two variables are active.

{{answer_format}})";

std::string describe_function(const logic::BooleanFunction& f) {
  std::ostringstream os;
  os << "Rule: Y = " << f.name << ", where A and B are the two active variables";
  os << (f.symmetric ? " (the rule is symmetric in A and B)." : " in some order (which one plays A is not given).");
  os << "\nTruth table of the rule:";
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) os << "\nA=" << a << ", B=" << b << ' ' << kArrow << " Y=" << int(f(a, b));
  return os.str();
}

std::string describe_trials(const VatInstance& inst) {
  std::ostringstream os;
  for (int t = 0; t < inst.n_trials; ++t) {
    if (t) os << '\n';
    os << "Trial " << (t + 1) << ": ";
    for (int v = 0; v < inst.n_vars; ++v) {
      if (v) os << ", ";
      os << 'V' << v << '=' << int(inst.design.at(t, v));
    }
    os << ' ' << kArrow << " Y=" << int(inst.outputs[static_cast<std::size_t>(t)]);
  }
  return os.str();
}

}  // namespace

std::string_view to_string(PromptMode m) { return m == PromptMode::Reasoning ? "reasoning" : "direct_answer"; }

PromptMode prompt_mode_from_string(std::string_view s) {
  if (s == "reasoning") return PromptMode::Reasoning;
  if (s == "direct_answer" || s == "direct") return PromptMode::DirectAnswer;
  throw std::invalid_argument("unknown prompt mode: " + std::string(s));
}

PromptTemplate PromptTemplate::standard() { return {"vat-prompt-v1", kStandardBody}; }

std::string fill_template(std::string_view body, const std::vector<std::pair<std::string, std::string>>& values,
                          std::initializer_list<std::string_view> required) {
  if (body.empty()) throw TemplateError("template is empty");
  for (auto slot : required) {
    if (body.find("{{" + std::string(slot) + "}}") == std::string_view::npos)
      throw TemplateError("template is missing slot {{" + std::string(slot) + "}}");
  }
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto open = body.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = body.find("}}", open);
    if (close == std::string_view::npos) break;
    out.append(body.substr(pos, open - pos));
    const std::string name(body.substr(open + 2, close - open - 2));
    bool found = false;
    for (const auto& [k, v] : values) {
      if (k == name) {
        out += v;
        found = true;
        break;
      }
    }
    if (!found) throw TemplateError("no value for template slot {{" + name + "}}");
    pos = close + 2;
  }
  out.append(body.substr(pos));
  return out;
}

PromptRendering render_prompt(const VatInstance& inst, PromptMode mode, const PromptTemplate& tmpl) {
  std::string vars;
  for (int v = 0; v < inst.n_vars; ++v) vars += (v ? ", V" : "V") + std::to_string(v);

  const std::string answer_format =
      "End your response with a final line of exactly this form, using the indices of the two active "
      "variables:\nANSWER: (Vi, Vj)";

  std::string text = fill_template(tmpl.body,
                                   {{"n_vars", std::to_string(inst.n_vars)},
                                    {"n_trials", std::to_string(inst.n_trials)},
                                    {"variables", vars},
                                    {"trials", describe_trials(inst)},
                                    {"function", describe_function(inst.function())},
                                    {"answer_format", answer_format}},
                                   {"variables", "trials", "function", "answer_format"});
  if (mode == PromptMode::DirectAnswer) {
    text += "\n";
    text += kDirectAnswerClause;
  }
  return {inst.instance_id, mode, std::move(text), tmpl.version};
}

std::string format_answer(const Pair& p) {
  return "ANSWER: (V" + std::to_string(p.first) + ", V" + std::to_string(p.second) + ")";
}

std::optional<PromptContent> parse_prompt_content(std::string_view text) {
  static const std::regex trial_re(R"(^Trial \d+: (.*) \xE2\x86\x92 Y=([01])\s*$)");
  static const std::regex cell_re(R"(V(\d+)=([01]))");
  static const std::regex table_re(R"(^A=([01]), B=([01]) \xE2\x86\x92 Y=([01])\s*$)");

  PromptContent out;
  logic::TruthTable table{};
  int table_rows = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    std::smatch m;
    if (std::regex_match(line, m, trial_re)) {
      Bits row;
      const std::string cells = m[1].str();
      int expected = 0;
      for (auto it = std::sregex_iterator(cells.begin(), cells.end(), cell_re); it != std::sregex_iterator(); ++it) {
        if (std::stoi((*it)[1].str()) != expected++) return std::nullopt;
        row.push_back((*it)[2].str() == "1");
      }
      try {
        out.design.append_row(row);
      } catch (const DimensionError&) {
        return std::nullopt;
      }
      out.outputs.push_back(m[2].str() == "1");
    } else if (std::regex_match(line, m, table_re)) {
      table[2 * std::stoi(m[1].str()) + std::stoi(m[2].str())] = static_cast<std::uint8_t>(std::stoi(m[3].str()));
      ++table_rows;
    }
  }
  if (table_rows != 4 || out.design.trials() == 0) return std::nullopt;
  out.function_id = logic::from_table(table).id;
  return out;
}

}  // namespace vat::eval
