#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <tuple>

#include "vat/instance.hpp"
#include "vat/random.hpp"

namespace vat::gen {

const TminEntry& TminTable::get(int n_vars, const logic::BooleanFunction& f) {
  const auto key = std::make_pair(n_vars, static_cast<int>(f.id));
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, t_min(n_vars, f, seed_, attempts_per_t_)).first;
  return it->second;
}

std::vector<TminEntry> TminTable::entries() const {
  std::vector<TminEntry> out;
  out.reserve(cache_.size());
  for (const auto& [key, e] : cache_) out.push_back(e);
  std::sort(out.begin(), out.end(), [](const TminEntry& a, const TminEntry& b) {
    return std::tie(a.function_id, a.n_vars) < std::tie(b.function_id, b.n_vars);
  });
  return out;
}

std::map<int, int> TminTable::per_n_maximum() const {
  std::map<int, int> out;
  for (const auto& [key, e] : cache_) out[e.n_vars] = std::max(out[e.n_vars], e.t_min);
  return out;
}

std::string TminTable::to_csv() const {
  std::ostringstream os;
  os << "function_id,N,t_min,attempts\n";
  for (const auto& e : entries()) os << e.function_id << ',' << e.n_vars << ',' << e.t_min << ',' << e.attempts << '\n';
  return os.str();
}

std::vector<TminEntry> TminTable::parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<TminEntry> out;
  if (!std::getline(is, line) || line.rfind("function_id,N,t_min,attempts", 0) != 0)
    throw std::invalid_argument("T_min CSV: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    TminEntry e;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d", &e.function_id, &e.n_vars, &e.t_min, &e.attempts) != 4)
      throw std::invalid_argument("T_min CSV: bad row: " + line);
    out.push_back(e);
  }
  return out;
}

void MaterialsGrid::validate() const {
  if (n_values.empty() || t_offsets.empty() || function_ids.empty())
    throw std::invalid_argument("materials grid has an empty axis");
  if (samples_per_cell < 1) throw std::invalid_argument("samples_per_cell must be >= 1");
  for (int n : n_values)
    if (n < 3) throw std::invalid_argument("grid N values must be >= 3");
  for (int o : t_offsets)
    if (o < 0) throw std::invalid_argument("grid T offsets must be >= 0");
  for (int id : function_ids)
    if (!logic::is_nontrivial(logic::function_by_id(id)))
      throw std::invalid_argument("grid function " + std::to_string(id) + " is trivial");
}

MaterialsError::MaterialsError(CellFailure cell)
    : std::runtime_error("generation failed for f=" + std::to_string(cell.function_id) + " N=" +
                         std::to_string(cell.n_vars) + " T=" + std::to_string(cell.n_trials) + " offset=" +
                         std::to_string(cell.t_offset) + " replicate=" + std::to_string(cell.replicate) + ": " +
                         cell.failure.reason),
      cell_(std::move(cell)) {}

std::uint64_t cell_seed(std::uint64_t master_seed, int function_id, int n_vars, int t_offset, int replicate) {
  return hash_seed(master_seed, {static_cast<std::uint64_t>(function_id), static_cast<std::uint64_t>(n_vars),
                                 static_cast<std::uint64_t>(t_offset), static_cast<std::uint64_t>(replicate)});
}

std::string instance_id_for(int function_id, int n_vars, int t_offset, int replicate) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "f%02d-n%02d-o%d-r%d", function_id, n_vars, t_offset, replicate);
  return buf;
}

Materials generate_materials(const MaterialsGrid& grid, std::uint64_t master_seed, TminTable& tmin, bool allow_holes,
                             int max_attempts) {
  grid.validate();
  Materials out;
  out.instances.reserve(grid.size());
  for (int fid : grid.function_ids) {
    const auto& f = logic::function_by_id(fid);
    for (int n : grid.n_values) {
      const int base = tmin.get(n, f).t_min;
      for (int offset : grid.t_offsets) {
        for (int rep = 0; rep < grid.samples_per_cell; ++rep) {
          const int t = base + offset;
          const auto seed = cell_seed(master_seed, fid, n, offset, rep);
          auto run = generate_counted(n, t, f, seed, max_attempts);
          CellStats stats{fid, n, offset, rep, t, run.attempts, true};
          if (auto* inst = std::get_if<VatInstance>(&run.result)) {
            inst->instance_id = instance_id_for(fid, n, offset, rep);
            out.instances.push_back(std::move(*inst));
          } else {
            CellFailure failure{fid, n, offset, rep, t, std::get<GenerationFailed>(run.result)};
            if (!allow_holes) throw MaterialsError(std::move(failure));
            stats.ok = false;
            out.failures.push_back(std::move(failure));
          }
          out.cells.push_back(stats);
        }
      }
    }
  }
  return out;
}

}  // namespace vat::gen
