#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "vat/cli/commands.hpp"
#include "vat/io.hpp"

namespace {

using namespace vat;

struct Flags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::string functions;
  std::string endpoint;
  std::string judge_endpoint;
  std::string model;
  std::string judge_model;
  std::string token_env;
  std::string judge_token_env;
  std::string mock;
  bool allow_holes = false;
  std::string cost;
  std::string out;
  std::string dataset;
  bool log_rho = false;
  std::string strategy;
  std::string mode;
  std::optional<int> max_in_flight;
  std::optional<int> retries;
  std::optional<int> timeout_ms;
  std::optional<double> temperature;
  std::optional<int> max_attempts;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "RunConfig JSON (e.g. a previous config.resolved); flags override it");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--grid", f.grid, "grid overrides, e.g. \"N=3,4,5;offsets=0,1;samples=2\"");
  sub->add_option("--functions", f.functions, "comma-separated functions, e.g. XOR,AND or 6,1");
  sub->add_option("--endpoint", f.endpoint, "model endpoint base URL");
  sub->add_option("--judge-endpoint", f.judge_endpoint, "judge endpoint base URL");
  sub->add_option("--model", f.model, "model name sent to the endpoint");
  sub->add_option("--judge-model", f.judge_model, "judge model name");
  sub->add_option("--token-env", f.token_env, "environment variable holding the model endpoint token");
  sub->add_option("--judge-token-env", f.judge_token_env, "environment variable holding the judge token");
  sub->add_option("--mock", f.mock, "in-process endpoint: oracle | wrong-xor")->check(CLI::IsMember({"oracle", "wrong-xor"}));
  sub->add_flag("--allow-holes", f.allow_holes, "skip grid cells that fail to generate");
  sub->add_option("--cost", f.cost, "cost model c_check,c_slot");
  sub->add_option("--out", f.out, "run directory");
  sub->add_option("--dataset", f.dataset, "instances JSONL (default: <out>/instances.jsonl)");
  sub->add_flag("--log-rho", f.log_rho, "fit the rho model on log rho");
  sub->add_option("--strategy", f.strategy, "both | permutation | elimination");
  sub->add_option("--mode", f.mode, "reasoning | direct_answer");
  sub->add_option("--max-in-flight", f.max_in_flight, "concurrent requests per endpoint");
  sub->add_option("--retries", f.retries, "retries after the first attempt");
  sub->add_option("--timeout-ms", f.timeout_ms, "per-request timeout");
  sub->add_option("--temperature", f.temperature, "sampling temperature");
  sub->add_option("--max-attempts", f.max_attempts, "generator attempt budget per cell");
}

void tune(eval::EndpointConfig& e, const Flags& f) {
  if (f.max_in_flight) e.max_in_flight = *f.max_in_flight;
  if (f.retries) e.retry.max_retries = *f.retries;
  if (f.timeout_ms) e.timeout = std::chrono::milliseconds(*f.timeout_ms);
  if (f.temperature) e.temperature = *f.temperature;
}

cli::RunConfig resolve(const Flags& f) {
  cli::RunConfig c;
  if (!f.config_file.empty()) {
    const auto j = nlohmann::json::parse(io::read_file(f.config_file), nullptr, false);
    if (j.is_discarded()) throw cli::ConfigError("config file is not JSON: " + f.config_file);
    c = cli::config_from_json(j);
  }
  if (f.seed) c.master_seed = *f.seed;
  if (!f.grid.empty()) cli::apply_grid_spec(c.grid, f.grid);
  if (!f.functions.empty()) c.grid.function_ids = cli::parse_functions(f.functions);
  if (!f.mock.empty()) c.mock = f.mock;
  if (f.allow_holes) c.allow_holes = true;
  if (!f.cost.empty()) c.cost = cli::parse_cost(f.cost);
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.dataset.empty()) c.dataset = f.dataset;
  if (f.log_rho) c.log_rho = true;
  if (!f.strategy.empty()) c.strategy = f.strategy;
  if (!f.mode.empty()) {
    try {
      c.mode = eval::prompt_mode_from_string(f.mode);
    } catch (const std::exception& e) {
      throw cli::ConfigError(e.what());
    }
  }
  if (f.max_attempts) c.max_attempts = *f.max_attempts;

  if (!f.endpoint.empty() || !f.model.empty() || !f.token_env.empty()) {
    if (!c.endpoint) c.endpoint.emplace();
    if (!f.endpoint.empty()) c.endpoint->base_url = f.endpoint;
    if (!f.model.empty()) c.endpoint->model_name = f.model;
    if (!f.token_env.empty()) c.endpoint->token_env = f.token_env;
    // A model name alone with --mock only renames the mock's transcript.
    if (c.endpoint->base_url.empty() && !c.mock.empty()) c.endpoint->base_url = "mock";
  }
  if (!f.judge_endpoint.empty() || !f.judge_model.empty() || !f.judge_token_env.empty()) {
    if (!c.judge_endpoint) c.judge_endpoint.emplace();
    if (!f.judge_endpoint.empty()) c.judge_endpoint->base_url = f.judge_endpoint;
    if (!f.judge_model.empty()) c.judge_endpoint->model_name = f.judge_model;
    if (!f.judge_token_env.empty()) c.judge_endpoint->token_env = f.judge_token_env;
  }
  if (c.endpoint) tune(*c.endpoint, f);
  if (c.judge_endpoint) tune(*c.judge_endpoint, f);
  if (c.mock.empty() && c.endpoint && c.endpoint->base_url == "mock") throw cli::ConfigError("--model without --endpoint");
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable attribution task toolkit: materials, solvers, model evaluation and strategy analysis"};
  app.require_subcommand(1);
  Flags flags;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen", "generate the instance grid, T_min table and generation report"},
      {"tmin", "compute the T_min table only"},
      {"solve", "run the reference solvers and write traces"},
      {"export", "render prompts for the dataset"},
      {"run", "query the model endpoint (or mock) and grade the answers"},
      {"judge", "label response strategies with the judge endpoint (or mock)"},
      {"report", "write report CSVs and summary.md from transcripts"},
      {"fit", "fit the strategy-selection models"},
      {"landscape", "write the decision landscape and 0.5 contour"},
      {"costmap", "predict strategies from the cost model"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_flags(sub, flags);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : vat::cli::kExitConfig;
  }

  const std::map<std::string, int (*)(const cli::RunConfig&)> handlers{
      {"gen", cli::cmd_gen},         {"tmin", cli::cmd_tmin},     {"solve", cli::cmd_solve},
      {"export", cli::cmd_export},   {"run", cli::cmd_run},       {"judge", cli::cmd_judge},
      {"report", cli::cmd_report},   {"fit", cli::cmd_fit},       {"landscape", cli::cmd_landscape},
      {"costmap", cli::cmd_costmap},
  };
  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    return cli::guarded(name, [&] { return handlers.at(name)(resolve(flags)); });
  }
  return cli::kExitOther;
}
