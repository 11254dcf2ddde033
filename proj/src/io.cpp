#include "vat/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vat::io {

namespace {

std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Bits bits_from_string(const std::string& s) {
  Bits out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit-string contains '" + std::string(1, c) + "'");
    out.push_back(c == '1');
  }
  return out;
}

}  // namespace

ordered_json instance_to_json(const VatInstance& inst) {
  ordered_json j;
  j["instance_id"] = inst.instance_id;
  j["n_vars"] = inst.n_vars;
  j["n_trials"] = inst.n_trials;
  j["function_id"] = inst.function_id;
  j["function_name"] = logic::function_by_id(inst.function_id).name;
  auto rows = ordered_json::array();
  for (std::size_t t = 0; t < inst.design.trials(); ++t) rows.push_back(bits_to_string(inst.design.row(t)));
  j["design"] = std::move(rows);
  j["outputs"] = bits_to_string(inst.outputs);
  j["truth_pair"] = {inst.truth_pair.first, inst.truth_pair.second};
  j["role_order"] = inst.role_order == RoleOrder::FirstIsA ? "ij" : "ji";
  j["seed"] = inst.seed;
  return j;
}

VatInstance instance_from_json(const nlohmann::json& j) {
  try {
    VatInstance inst;
    inst.instance_id = j.at("instance_id").get<std::string>();
    inst.n_vars = j.at("n_vars").get<int>();
    inst.n_trials = j.at("n_trials").get<int>();
    inst.function_id = j.at("function_id").get<int>();
    if (inst.function_id < 0 || inst.function_id > 15) throw std::invalid_argument("function_id out of range");
    if (j.contains("function_name") &&
        j.at("function_name").get<std::string>() != logic::function_by_id(inst.function_id).name)
      throw std::invalid_argument("function_name does not match function_id");
    for (const auto& row : j.at("design")) {
      const Bits bits = bits_from_string(row.get<std::string>());
      inst.design.append_row(bits);
    }
    if (inst.design.trials() == 0) inst.design = Design(0, static_cast<std::size_t>(inst.n_vars));
    inst.outputs = bits_from_string(j.at("outputs").get<std::string>());
    const auto& tp = j.at("truth_pair");
    if (!tp.is_array() || tp.size() != 2) throw std::invalid_argument("truth_pair must have two entries");
    inst.truth_pair = Pair(tp[0].get<int>(), tp[1].get<int>());
    const auto order = j.at("role_order").get<std::string>();
    if (order != "ij" && order != "ji") throw std::invalid_argument("role_order must be \"ij\" or \"ji\"");
    inst.role_order = order == "ij" ? RoleOrder::FirstIsA : RoleOrder::SecondIsA;
    inst.seed = j.at("seed").get<std::uint64_t>();
    if (static_cast<int>(inst.design.trials()) != inst.n_trials || static_cast<int>(inst.design.vars()) != inst.n_vars ||
        static_cast<int>(inst.outputs.size()) != inst.n_trials)
      throw std::invalid_argument("design/outputs shape disagrees with n_vars/n_trials");
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  } catch (const DimensionError& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  }
}

std::string instances_to_jsonl(std::span<const VatInstance> instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += instance_to_json(inst).dump();
    out += '\n';
  }
  return out;
}

std::vector<VatInstance> instances_from_jsonl(const std::string& text) {
  std::vector<VatInstance> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(instance_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<VatInstance> read_instances(const std::filesystem::path& path) {
  return instances_from_jsonl(read_file(path));
}

void write_instances(const std::filesystem::path& path, std::span<const VatInstance> instances) {
  write_file(path, instances_to_jsonl(instances));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

std::string pair_to_string(const Pair& p) {
  return "(V" + std::to_string(p.first) + ", V" + std::to_string(p.second) + ")";
}

ordered_json trace_to_json(const std::string& instance_id, const solve::SolveTrace& trace, bool correct) {
  ordered_json j;
  j["instance_id"] = instance_id;
  j["strategy"] = std::string(solve::to_string(trace.strategy));
  j["predicted_pair"] = {trace.predicted_pair.first, trace.predicted_pair.second};
  j["correct"] = correct;
  j["consistency_checks"] = trace.consistency_checks;
  j["trials_processed"] = trace.trials_processed;
  j["surviving_counts"] = trace.surviving_counts;
  j["peak_working_set"] = trace.peak_working_set;
  j["resolved_at"] = trace.resolved_at;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace vat::io
