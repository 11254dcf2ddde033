#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "vat/cli/commands.hpp"
#include "vat/cli/config.hpp"
#include "vat/cli/report.hpp"
#include "vat/eval/transcript.hpp"
#include "vat/io.hpp"

using namespace vat;
using namespace vat::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / "vat_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.master_seed = 11;
  apply_grid_spec(c.grid, "N=3,4,6,8;offsets=0,1;samples=1");
  c.out_dir = out;
  return c;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(io::read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  ADD_FAILURE() << "no column " << name;
  return 0;
}

int run_vat(const std::string& args) {
  const int status = std::system((std::string(VAT_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, GridAndFunctionParsing) {
  gen::MaterialsGrid g;
  apply_grid_spec(g, "N=3,5;samples=2");
  EXPECT_EQ(g.n_values, (std::vector<int>{3, 5}));
  EXPECT_EQ(g.samples_per_cell, 2);
  EXPECT_EQ(g.t_offsets, (std::vector<int>{0, 1, 2, 3, 4, 5}));
  EXPECT_THROW(apply_grid_spec(g, "N=;"), ConfigError);
  EXPECT_THROW(apply_grid_spec(g, "depth=3"), ConfigError);

  EXPECT_EQ(parse_functions("XOR,AND"), (std::vector<int>{6, 1}));
  EXPECT_EQ(parse_functions("6,14"), (std::vector<int>{6, 14}));
  EXPECT_THROW(parse_functions("FALSE"), ConfigError);
  EXPECT_THROW(parse_functions("NOPE"), ConfigError);

  const auto cost = parse_cost("2,0.25");
  EXPECT_DOUBLE_EQ(cost.c_check, 2.0);
  EXPECT_DOUBLE_EQ(cost.c_slot, 0.25);
  EXPECT_THROW(parse_cost("1"), ConfigError);
}

TEST(Config, JsonRoundTripKeepsTokenOut) {
  RunConfig c = small_config("x");
  c.strategy = "elimination";
  eval::EndpointConfig e;
  e.base_url = "https://example.invalid";
  e.model_name = "m";
  e.token_env = "VAT_TEST_TOKEN";
  c.endpoint = e;
  ::setenv("VAT_TEST_TOKEN", "s3cret-value", 1);
  const auto j = config_to_json(c);
  EXPECT_EQ(j.dump().find("s3cret-value"), std::string::npos);
  const auto back = config_from_json(j);
  EXPECT_EQ(config_to_json(back).dump(), j.dump());
  EXPECT_EQ(back.endpoint->token_env, "VAT_TEST_TOKEN");

  c.strategy = "greedy";
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Commands, GenAndSolveAreDeterministic) {
  std::vector<fs::path> dirs{fresh_dir("det_a"), fresh_dir("det_b")};
  for (const auto& d : dirs) {
    const auto c = small_config(d);
    ASSERT_EQ(guarded("gen", [&] { return cmd_gen(c); }), kExitOk);
    ASSERT_EQ(guarded("solve", [&] { return cmd_solve(c); }), kExitOk);
  }
  for (const char* f : {"instances.jsonl", "tmin.csv", "gen_report.csv", "traces/traces.jsonl", "traces/traces.csv",
                        "traces/summary.csv", "traces/agreement.csv", "traces/pruning.csv", "traces/errors.csv"}) {
    const auto a = io::read_file(dirs[0] / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, io::read_file(dirs[1] / f)) << f;
  }
  const auto agreement = read_csv(dirs[0] / "traces/agreement.csv");
  ASSERT_EQ(agreement[1].size(), 4u);
  EXPECT_EQ(agreement[1][0], "80");
  EXPECT_EQ(agreement[1][1], "80");
  EXPECT_EQ(agreement[1][2], "0");
  EXPECT_DOUBLE_EQ(std::stod(agreement[1][3]), 1.0);
  EXPECT_EQ(read_csv(dirs[0] / "traces/traces.csv").size(), 161u);
}

TEST(Commands, FunctionFilter) {
  const auto d = fresh_dir("xor_only");
  RunConfig c;
  c.grid.function_ids = parse_functions("XOR");
  c.out_dir = d;
  ASSERT_EQ(guarded("gen", [&] { return cmd_gen(c); }), kExitOk);
  const auto insts = io::read_instances(d / "instances.jsonl");
  EXPECT_EQ(insts.size(), 300u);
  for (const auto& i : insts) EXPECT_EQ(i.function_id, 6);
}

TEST(Commands, CorruptedInstanceExitsSix) {
  const auto d = fresh_dir("corrupt");
  const auto c = small_config(d);
  ASSERT_EQ(guarded("gen", [&] { return cmd_gen(c); }), kExitOk);
  auto insts = io::read_instances(d / "instances.jsonl");
  insts[5].outputs[0] ^= 1;
  io::write_instances(d / "instances.jsonl", insts);
  EXPECT_EQ(guarded("solve", [&] { return cmd_solve(c); }), kExitInvalidInstance);
  const auto errors = read_csv(d / "traces/errors.csv");
  ASSERT_EQ(errors.size(), 2u);
  EXPECT_EQ(errors[1][0], insts[5].instance_id);
}

TEST(Commands, OracleMockPipeline) {
  const auto d = fresh_dir("oracle");
  auto c = small_config(d);
  c.mock = "oracle";
  for (auto* cmd : {cmd_gen, cmd_export, cmd_run, cmd_judge, cmd_report})
    ASSERT_EQ(guarded("step", [&] { return cmd(c); }), kExitOk);

  const auto acc = read_csv(d / "reports/accuracy_by_function_n.csv");
  ASSERT_EQ(acc.size(), 1u + 10 * 4);
  const int a = column(acc[0], "accuracy"), u = column(acc[0], "unparsed");
  for (std::size_t i = 1; i < acc.size(); ++i) {
    EXPECT_DOUBLE_EQ(std::stod(acc[i][a]), 1.0);
    EXPECT_EQ(acc[i][u], "0");
  }

  // The oracle narrates elimination from N=6 on.
  const auto el = read_csv(d / "reports/elimination_by_n.csv");
  const int n = column(el[0], "N"), prop = column(el[0], "proportion");
  for (std::size_t i = 1; i < el.size(); ++i)
    EXPECT_DOUBLE_EQ(std::stod(el[i][prop]), std::stoi(el[i][n]) >= 6 ? 1.0 : 0.0);

  // A second run resumes and sends nothing new.
  const auto transcript = RunPaths(c).transcript_for("mock-oracle");
  const auto before = eval::scan(transcript).entries.size();
  ASSERT_EQ(guarded("run", [&] { return cmd_run(c); }), kExitOk);
  EXPECT_EQ(eval::scan(transcript).entries.size(), before);
}

TEST(Commands, WrongXorMockDegradesOnlyXor) {
  const auto d = fresh_dir("wrong_xor");
  auto c = small_config(d);
  c.mock = "wrong-xor";
  for (auto* cmd : {cmd_gen, cmd_export, cmd_run, cmd_report})
    ASSERT_EQ(guarded("step", [&] { return cmd(c); }), kExitOk);
  const auto acc = read_csv(d / "reports/accuracy_by_function_n.csv");
  const int f = column(acc[0], "function_id"), a = column(acc[0], "accuracy");
  for (std::size_t i = 1; i < acc.size(); ++i)
    EXPECT_DOUBLE_EQ(std::stod(acc[i][a]), acc[i][f] == "6" ? 0.0 : 1.0) << acc[i][f];
}

TEST(Commands, ConstantOutcomeFitExitsFive) {
  const auto d = fresh_dir("fit_constant");
  const auto c = small_config(d);
  fs::create_directories(d / "reports");
  std::string csv = "instance_id,model,function_id,class,N,T,\"log_C(N,2)\",rho,y\n";
  for (int i = 0; i < 20; ++i)
    csv += "i" + std::to_string(i) + ",m,1,conjunctive," + std::to_string(3 + i % 5) + "," + std::to_string(3 + i % 4) +
           ",1.0,2.0,1\n";
  io::write_file(d / "reports/regression_table.csv", csv);
  EXPECT_EQ(guarded("fit", [&] { return cmd_fit(c); }), kExitFit);
}

TEST(Commands, FitAndLandscapeOnNoisyTable) {
  const auto d = fresh_dir("fit_noisy");
  const auto c = small_config(d);
  fs::create_directories(d / "reports");
  std::string csv = "instance_id,model,function_id,class,N,T,\"log_C(N,2)\",rho,y\n";
  const int ns[] = {3, 4, 6, 8, 10, 12, 16};
  int i = 0;
  for (int n : ns)
    for (int t = gen::lower_bound_trials(n); t < gen::lower_bound_trials(n) + 4; ++t)
      for (int rep = 0; rep < 10; ++rep, ++i) {
        // More elimination at larger N, less at larger T, never pure.
        const int y = rep < std::clamp(n / 2 - (t - gen::lower_bound_trials(n)), 1, 9) ? 1 : 0;
        csv += "i" + std::to_string(i) + ",m,1,conjunctive," + std::to_string(n) + "," + std::to_string(t) + ",0,0," +
               std::to_string(y) + "\n";
      }
  io::write_file(d / "reports/regression_table.csv", csv);
  ASSERT_EQ(guarded("fit", [&] { return cmd_fit(c); }), kExitOk);
  const auto cmp = read_csv(d / "reports/model_comparison.csv");
  EXPECT_EQ(cmp.size(), 6u);
  ASSERT_EQ(guarded("landscape", [&] { return cmd_landscape(c); }), kExitOk);
  EXPECT_GT(read_csv(d / "reports/landscape.csv").size(), 1u);
  EXPECT_TRUE(fs::exists(d / "reports/contour.csv"));
  EXPECT_EQ(read_csv(d / "reports/mean_path.csv").size(), 1u + 7u);
}

TEST(Commands, CostmapWritesEveryCell) {
  const auto d = fresh_dir("costmap");
  const auto c = small_config(d);
  ASSERT_EQ(guarded("gen", [&] { return cmd_gen(c); }), kExitOk);
  ASSERT_EQ(guarded("costmap", [&] { return cmd_costmap(c); }), kExitOk);
  const auto rows = read_csv(d / "reports/costmap.csv");
  ASSERT_GT(rows.size(), 1u);
  const int choice = column(rows[0], "choice");
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_TRUE(rows[i][choice] == "permutation" || rows[i][choice] == "elimination") << rows[i][choice];
}

TEST(Binary, ExitCodes) {
  const auto d = fresh_dir("binary");
  EXPECT_EQ(run_vat("gen --no-such-flag"), kExitConfig);
  EXPECT_EQ(run_vat("gen --out " + d.string() + " --grid 'N=2'"), kExitConfig);
  EXPECT_EQ(run_vat("run --out " + d.string()), kExitConfig);
  EXPECT_EQ(run_vat("gen --out " + d.string() + " --grid 'N=3,4;offsets=0;samples=1'"), kExitOk);
  EXPECT_EQ(run_vat("fit --out " + d.string()), kExitConfig);
}

TEST(Commands, ShippedTminTableIsCurrent) {
  const auto d = fresh_dir("tmin");
  RunConfig c;
  c.out_dir = d;
  ASSERT_EQ(guarded("tmin", [&] { return cmd_tmin(c); }), kExitOk);
  EXPECT_EQ(io::read_file(d / "tmin.csv"), io::read_file(fs::path(VAT_DATA) / "tmin.csv"));
}
