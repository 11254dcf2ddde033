#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vat/eval/chat_client.hpp"
#include "vat/eval/prompt.hpp"
#include "vat/instance.hpp"
#include "vat/stats/cost_model.hpp"

namespace vat::cli {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Everything a command needs besides its input files.
struct RunConfig {
  std::uint64_t master_seed = 1;
  gen::MaterialsGrid grid;
  bool allow_holes = false;
  int max_attempts = gen::kDefaultMaxAttempts;
  eval::PromptMode mode = eval::PromptMode::Reasoning;
  std::string strategy = "both";  // both | permutation | elimination
  std::optional<eval::EndpointConfig> endpoint;
  std::optional<eval::EndpointConfig> judge_endpoint;
  std::string mock;  // "", "oracle" or "wrong-xor"
  std::filesystem::path out_dir = "run";
  /// Instance file to read; empty means out_dir/instances.jsonl.
  std::filesystem::path dataset;
  stats::CostModel cost{1.0, 0.4};
  bool log_rho = false;
  std::vector<std::string> report_formats{"csv", "md"};

  void validate() const;
};

nlohmann::ordered_json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// "N=3,4,5;offsets=0,1;samples=2". Keys may be omitted; omitted keys keep
/// the values already in `grid`.
void apply_grid_spec(gen::MaterialsGrid& grid, const std::string& spec);

/// Comma-separated names, keys or ids, e.g. "XOR,AND" or "6,1".
std::vector<int> parse_functions(const std::string& list);

/// "c_check,c_slot".
stats::CostModel parse_cost(const std::string& text);

}  // namespace vat::cli
