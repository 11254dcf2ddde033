#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vat/instance.hpp"
#include "vat/solvers.hpp"

namespace vat::io {

using ordered_json = nlohmann::ordered_json;

/// Instance JSONL object:
/// {instance_id, n_vars, n_trials, function_id, function_name,
///  design: ["0101", ...] (one bit-string per trial, V0 first),
///  outputs: "0110", truth_pair: [i, j], role_order: "ij" | "ji", seed}
ordered_json instance_to_json(const VatInstance& inst);

/// Parses the schema above. Throws std::invalid_argument on malformed input
/// (shape problems only; call gen::validate_instance for semantics).
VatInstance instance_from_json(const nlohmann::json& j);

std::string instances_to_jsonl(std::span<const VatInstance> instances);
std::vector<VatInstance> instances_from_jsonl(const std::string& text);

std::vector<VatInstance> read_instances(const std::filesystem::path& path);
void write_instances(const std::filesystem::path& path, std::span<const VatInstance> instances);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

std::string pair_to_string(const Pair& p);  // "(V0, V3)"

/// Full trace object for the traces JSONL.
ordered_json trace_to_json(const std::string& instance_id, const solve::SolveTrace& trace, bool correct);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace vat::io
