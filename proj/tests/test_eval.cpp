#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "vat/eval/batch.hpp"
#include "vat/eval/prompt.hpp"
#include "vat/eval/record.hpp"
#include "vat/eval/transcript.hpp"
#include "vat/instance.hpp"
#include "vat/io.hpp"
#include "vat/logic.hpp"

using namespace vat;
using namespace vat::eval;
namespace fs = std::filesystem;

namespace {

VatInstance hand_instance() {
  VatInstance inst;
  inst.instance_id = "hand-and";
  inst.n_vars = 3;
  inst.n_trials = 3;
  inst.function_id = 1;
  inst.design = Design(3, 3);
  const int cols[3][3] = {{1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
  for (int v = 0; v < 3; ++v)
    for (int t = 0; t < 3; ++t) inst.design.set(t, v, cols[v][t]);
  inst.outputs = {1, 0, 0};
  inst.truth_pair = {0, 1};
  return inst;
}

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "vat_eval_tests";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

EvalRecord record_for(const VatInstance& inst, const std::string& response, const std::string& reasoning = "") {
  EvalRecord r;
  r.instance_id = inst.instance_id;
  r.model_name = "m";
  r.response_text = response;
  r.reasoning_text = reasoning;
  finalize_record(r, inst);
  return r;
}

}  // namespace

TEST(Prompt, GoldenSnapshot) {
  const auto r = render_prompt(hand_instance(), PromptMode::Reasoning, PromptTemplate::standard());
  const std::string golden = io::read_file(fs::path(VAT_FIXTURES) / "prompt_n3_and.txt");
  EXPECT_EQ(r.text, golden);
  EXPECT_EQ(r.template_version, "vat-prompt-v1");
  EXPECT_EQ(r.instance_id, "hand-and");
}

TEST(Prompt, Contents) {
  const auto text = render_prompt(hand_instance(), PromptMode::Reasoning, PromptTemplate::standard()).text;
  EXPECT_NE(text.find("V0, V1, V2"), std::string::npos);
  EXPECT_NE(text.find("Trial 1: V0=1, V1=1, V2=1 \xE2\x86\x92 Y=1"), std::string::npos);
  EXPECT_NE(text.find("Trial 3: V0=0, V1=1, V2=1 \xE2\x86\x92 Y=0"), std::string::npos);
  EXPECT_EQ(text.find("Trial 4"), std::string::npos);
  EXPECT_NE(text.find("A AND B"), std::string::npos);
  EXPECT_NE(text.find("ANSWER: (Vi, Vj)"), std::string::npos);
  EXPECT_EQ(text.find(std::string(kDirectAnswerClause)), std::string::npos);
}

TEST(Prompt, DirectAnswerAppendsClause) {
  const auto inst = hand_instance();
  const auto a = render_prompt(inst, PromptMode::Reasoning, PromptTemplate::standard());
  const auto b = render_prompt(inst, PromptMode::DirectAnswer, PromptTemplate::standard());
  EXPECT_EQ(b.text, a.text + "\n" + std::string(kDirectAnswerClause));
  EXPECT_EQ(b.mode, PromptMode::DirectAnswer);
}

TEST(Prompt, TemplateErrors) {
  const auto inst = hand_instance();
  EXPECT_THROW(render_prompt(inst, PromptMode::Reasoning, {"empty", ""}), TemplateError);
  EXPECT_THROW(render_prompt(inst, PromptMode::Reasoning, {"bad", "{{variables}} {{trials}} {{function}}"}), TemplateError);
  EXPECT_THROW(render_prompt(inst, PromptMode::Reasoning,
                             {"bad", "{{variables}} {{trials}} {{function}} {{answer_format}} {{unknown}}"}),
               TemplateError);
}

TEST(Prompt, ContentRoundTripOverGrid) {
  gen::MaterialsGrid grid;
  grid.n_values = {3, 5, 8, 12, 16};
  grid.samples_per_cell = 1;
  gen::TminTable tmin(3);
  for (const auto& inst : gen::generate_materials(grid, 3, tmin).instances) {
    const auto text = render_prompt(inst, PromptMode::Reasoning, PromptTemplate::standard()).text;
    const auto content = parse_prompt_content(text);
    ASSERT_TRUE(content.has_value()) << inst.instance_id;
    EXPECT_EQ(content->design, inst.design);
    EXPECT_EQ(content->outputs, inst.outputs);
    EXPECT_EQ(content->function_id, inst.function_id);
    // Oracle answer in the required format grades as correct.
    const auto r = record_for(inst, "reasoning...\n" + format_answer(inst.truth_pair));
    EXPECT_TRUE(r.correct) << inst.instance_id;
  }
}

TEST(ParseAnswer, Cases) {
  EXPECT_EQ(parse_answer("so ANSWER: (V2, V0)", 3), Pair(0, 2));
  EXPECT_EQ(parse_answer("answer:(v1,v2)", 3), Pair(1, 2));
  EXPECT_EQ(parse_answer("Answer :  ( V0 ,  V1 )", 3), Pair(0, 1));
  EXPECT_FALSE(parse_answer("ANSWER: (V1, V1)", 3));
  EXPECT_FALSE(parse_answer("ANSWER: (V1, V3)", 3));
  EXPECT_FALSE(parse_answer("I think V0 and V1", 3));
  EXPECT_FALSE(parse_answer("", 3));
  EXPECT_EQ(parse_answer("ANSWER: (V0, V1)\nwait, no.\nANSWER: (V4, V2)", 5), Pair(2, 4));
  EXPECT_EQ(parse_answer("ANSWER: (V12, V3)", 16), Pair(3, 12));
}

TEST(Grade, Basics) {
  const auto inst = hand_instance();
  EXPECT_TRUE(record_for(inst, "ANSWER: (V0, V1)").correct);
  EXPECT_TRUE(record_for(inst, "ANSWER: (V1, V0)").correct);
  EXPECT_FALSE(record_for(inst, "ANSWER: (V0, V2)").correct);
  const auto unparsed = record_for(inst, "no idea");
  EXPECT_FALSE(unparsed.correct);
  EXPECT_FALSE(unparsed.parsed_answer);

  auto other = record_for(inst, "ANSWER: (V0, V1)");
  other.instance_id = "someone-else";
  EXPECT_THROW(grade(other, inst), GradeMismatch);
}

TEST(Record, CharCountAdditivity) {
  const auto inst = hand_instance();
  const auto r = record_for(inst, "ANSWER: (V0, V1) \xE2\x86\x92 done", "pr\xC3\xBC" "fe");
  EXPECT_EQ(r.char_count_total, char_count(r.reasoning_text) + char_count(r.response_text));
  EXPECT_EQ(char_count("pr\xC3\xBC" "fe"), 5u);
  EXPECT_EQ(char_count("\xE2\x86\x92"), 1u);
  EXPECT_EQ(r.char_count_total, 5u + 23u);
}

TEST(Record, JsonRoundTrip) {
  auto r = record_for(hand_instance(), "ANSWER: (V0, V1)", "thinking");
  r.judge_label = JudgeLabel::Elimination;
  r.judge_model = "judge";
  r.attempt_count = 2;
  r.temperature = 0.7;
  r.started_at = "2024-01-01T00:00:00Z";
  const auto back = record_from_json(record_to_json(r));
  EXPECT_EQ(record_to_json(back).dump(), record_to_json(r).dump());
  EXPECT_EQ(record_to_json(record_for(hand_instance(), "x"))["judge_label"], "UNJUDGED");
}

TEST(Transcript, AppendScanRoundTrip) {
  const auto path = temp_file("roundtrip.jsonl");
  const auto r = record_for(hand_instance(), "ANSWER: (V0, V1)");
  {
    TranscriptLog log(path);
    log.append_record(r);
  }
  const auto s = scan(path);
  ASSERT_EQ(s.entries.size(), 1u);
  const auto latest = latest_records(s);
  ASSERT_EQ(latest.size(), 1u);
  EXPECT_EQ(record_to_json(latest[0]).dump(), record_to_json(r).dump());
  const auto raw = io::read_file(path);
  EXPECT_EQ(raw, s.lines[0] + "\n");
}

TEST(Transcript, TruncatedFinalLineIsSkipped) {
  const auto path = temp_file("truncated.jsonl");
  {
    TranscriptLog log(path);
    for (int i = 0; i < 3; ++i) {
      auto r = record_for(hand_instance(), "ANSWER: (V0, V1)");
      r.instance_id = "i" + std::to_string(i);
      r.correct = false;
      log.append_record(r);
    }
  }
  {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    out << "{\"kind\":\"record\",\"instance_id\":\"i3\",\"mod";
  }
  const auto s = scan(path);
  EXPECT_EQ(s.entries.size(), 3u);
  EXPECT_EQ(s.skipped_truncated, 1u);
  EXPECT_EQ(latest_records(s).size(), 3u);
}

TEST(Transcript, CorruptMiddleLineThrows) {
  const auto path = temp_file("corrupt.jsonl");
  io::write_file(path, "{\"kind\":\"attempt\"}\nnot json\n{\"kind\":\"attempt\"}\n");
  EXPECT_THROW(scan(path), std::runtime_error);
  EXPECT_THROW(scan(temp_file("missing.jsonl")), std::runtime_error);
}

TEST(Transcript, ConcatenatedLogsScanInOrder) {
  const auto a = temp_file("a.jsonl");
  const auto b = temp_file("b.jsonl");
  auto rec = [&](const std::string& id) {
    auto r = record_for(hand_instance(), "ANSWER: (V0, V1)");
    r.instance_id = id;
    return r;
  };
  {
    TranscriptLog la(a), lb(b);
    la.append_record(rec("x1"));
    la.append_record(rec("x2"));
    lb.append_record(rec("y1"));
  }
  const auto both = temp_file("both.jsonl");
  io::write_file(both, io::read_file(a) + io::read_file(b));
  const auto s = scan(both);
  ASSERT_EQ(s.entries.size(), 3u);
  EXPECT_EQ(s.entries[0]["instance_id"], "x1");
  EXPECT_EQ(s.entries[1]["instance_id"], "x2");
  EXPECT_EQ(s.entries[2]["instance_id"], "y1");
}

TEST(Transcript, LatestRecordWins) {
  const auto path = temp_file("latest.jsonl");
  {
    TranscriptLog log(path);
    auto r = record_for(hand_instance(), "ANSWER: (V0, V1)");
    log.append_record(r);
    log.append({{"kind", "attempt"}, {"instance_id", "hand-and"}});
    r.judge_label = JudgeLabel::Permutation;
    log.append_record(r);
  }
  const auto latest = latest_records(scan(path));
  ASSERT_EQ(latest.size(), 1u);
  EXPECT_EQ(latest[0].judge_label, JudgeLabel::Permutation);
}

TEST(Verdict, Tokens) {
  EXPECT_EQ(parse_verdict("ELIMINATION"), JudgeLabel::Elimination);
  EXPECT_EQ(parse_verdict("The model tests pairs.\nPERMUTATION\n"), JudgeLabel::Permutation);
  EXPECT_EQ(parse_verdict("reason\n**INVALID**\n\n"), JudgeLabel::Invalid);
  EXPECT_EQ(parse_verdict("reason\n  ELIMINATION.  "), JudgeLabel::Elimination);
  EXPECT_FALSE(parse_verdict("It looks like elimination to me."));
  EXPECT_FALSE(parse_verdict("ELIMINATION\nbut maybe not"));
  EXPECT_FALSE(parse_verdict("elimination"));
  EXPECT_FALSE(parse_verdict(""));
}

TEST(Verdict, JudgePromptEmbedsBothTexts) {
  auto r = record_for(hand_instance(), "ANSWER: (V0, V1)", "step one\nstep two");
  const auto text = render_judge_prompt(r, JudgeTemplate::standard());
  EXPECT_NE(text.find("<reasoning>\nstep one\nstep two\n</reasoning>"), std::string::npos);
  EXPECT_NE(text.find("<response>\nANSWER: (V0, V1)\n</response>"), std::string::npos);
  EXPECT_THROW(render_judge_prompt(r, {"bad", "{{reasoning}} only"}), TemplateError);
}
