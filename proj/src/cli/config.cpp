#include "vat/cli/config.hpp"

#include <algorithm>
#include <sstream>

#include "vat/logic.hpp"

namespace vat::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad integer '" + item + "' in " + what);
    }
  }
  if (out.empty()) throw ConfigError(what + " is empty");
  return out;
}

nlohmann::ordered_json optional_endpoint(const std::optional<eval::EndpointConfig>& e) {
  return e ? eval::endpoint_to_json(*e) : nlohmann::ordered_json(nullptr);
}

std::optional<eval::EndpointConfig> endpoint_or_null(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return eval::endpoint_from_json(j[key]);
}

}  // namespace

void RunConfig::validate() const {
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  if (strategy != "both" && strategy != "permutation" && strategy != "elimination")
    throw ConfigError("strategy must be both, permutation or elimination");
  if (!mock.empty() && mock != "oracle" && mock != "wrong-xor") throw ConfigError("mock must be oracle or wrong-xor");
  try {
    if (endpoint) endpoint->validate();
    if (judge_endpoint) judge_endpoint->validate();
    cost.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (out_dir.empty()) throw ConfigError("output directory is empty");
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["master_seed"] = c.master_seed;
  j["grid"] = {{"n_values", c.grid.n_values},
               {"t_offsets", c.grid.t_offsets},
               {"samples_per_cell", c.grid.samples_per_cell},
               {"function_ids", c.grid.function_ids}};
  j["allow_holes"] = c.allow_holes;
  j["max_attempts"] = c.max_attempts;
  j["mode"] = std::string(eval::to_string(c.mode));
  j["strategy"] = c.strategy;
  j["endpoint"] = optional_endpoint(c.endpoint);
  j["judge_endpoint"] = optional_endpoint(c.judge_endpoint);
  j["mock"] = c.mock;
  j["out_dir"] = c.out_dir.generic_string();
  j["dataset"] = c.dataset.generic_string();
  j["cost"] = {{"c_check", c.cost.c_check}, {"c_slot", c.cost.c_slot}};
  j["log_rho"] = c.log_rho;
  j["report_formats"] = c.report_formats;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      c.grid.n_values = g.value("n_values", c.grid.n_values);
      c.grid.t_offsets = g.value("t_offsets", c.grid.t_offsets);
      c.grid.samples_per_cell = g.value("samples_per_cell", c.grid.samples_per_cell);
      c.grid.function_ids = g.value("function_ids", c.grid.function_ids);
    }
    c.allow_holes = j.value("allow_holes", c.allow_holes);
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    c.mode = eval::prompt_mode_from_string(j.value("mode", std::string(eval::to_string(c.mode))));
    c.strategy = j.value("strategy", c.strategy);
    c.endpoint = endpoint_or_null(j, "endpoint");
    c.judge_endpoint = endpoint_or_null(j, "judge_endpoint");
    c.mock = j.value("mock", c.mock);
    c.out_dir = j.value("out_dir", c.out_dir.generic_string());
    c.dataset = j.value("dataset", std::string());
    if (j.contains("cost")) {
      c.cost.c_check = j["cost"].value("c_check", c.cost.c_check);
      c.cost.c_slot = j["cost"].value("c_slot", c.cost.c_slot);
    }
    c.log_rho = j.value("log_rho", c.log_rho);
    c.report_formats = j.value("report_formats", c.report_formats);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return c;
}

void apply_grid_spec(gen::MaterialsGrid& grid, const std::string& spec) {
  for (const auto& part : split(spec, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("grid entry '" + part + "' lacks '='");
    std::string key = part.substr(0, eq);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
    const std::string value = part.substr(eq + 1);
    if (key == "n") {
      grid.n_values = parse_ints(value, "grid N");
    } else if (key == "offsets") {
      grid.t_offsets = parse_ints(value, "grid offsets");
    } else if (key == "samples") {
      const auto v = parse_ints(value, "grid samples");
      if (v.size() != 1) throw ConfigError("grid samples takes one value");
      grid.samples_per_cell = v.front();
    } else {
      throw ConfigError("unknown grid key '" + key + "'");
    }
  }
}

std::vector<int> parse_functions(const std::string& list) {
  std::vector<int> ids;
  for (const auto& name : split(list, ',')) {
    try {
      const auto& f = logic::function_by_name(name);
      if (!logic::is_nontrivial(f)) throw ConfigError("function '" + name + "' is not one of the ten task functions");
      ids.push_back(f.id);
    } catch (const std::out_of_range&) {
      throw ConfigError("unknown function '" + name + "'");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (ids.empty()) throw ConfigError("function list is empty");
  return ids;
}

stats::CostModel parse_cost(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("--cost expects c_check,c_slot");
  stats::CostModel cost;
  try {
    cost.c_check = std::stod(parts[0]);
    cost.c_slot = std::stod(parts[1]);
    cost.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad --cost: ") + e.what());
  }
  return cost;
}

}  // namespace vat::cli
