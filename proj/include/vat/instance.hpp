#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vat/logic.hpp"

namespace vat {

using Bits = std::vector<std::uint8_t>;

/// Unordered pair of candidate variable indices, stored with first < second.
struct Pair {
  int first = 0;
  int second = 1;

  Pair() = default;
  Pair(int a, int b) : first(a < b ? a : b), second(a < b ? b : a) {}

  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// Trials x variables bit matrix. Row t holds the inputs of trial t.
class Design {
 public:
  Design() = default;
  Design(std::size_t trials, std::size_t vars) : trials_(trials), vars_(vars), bits_(trials * vars, 0) {}

  std::size_t trials() const { return trials_; }
  std::size_t vars() const { return vars_; }

  std::uint8_t at(std::size_t trial, std::size_t var) const { return bits_[trial * vars_ + var]; }
  void set(std::size_t trial, std::size_t var, std::uint8_t bit) { bits_[trial * vars_ + var] = bit & 1; }

  std::span<const std::uint8_t> row(std::size_t trial) const {
    return {bits_.data() + trial * vars_, vars_};
  }
  Bits column(std::size_t var) const;
  int ones_in_column(std::size_t var) const;

  /// First `trials` rows only.
  Design prefix(std::size_t trials) const;
  void append_row(std::span<const std::uint8_t> row);

  friend bool operator==(const Design&, const Design&) = default;

 private:
  std::size_t trials_ = 0;
  std::size_t vars_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Which truth variable binds to argument A of the function.
enum class RoleOrder { FirstIsA, SecondIsA };

struct VatInstance {
  std::string instance_id;
  int n_vars = 0;
  int n_trials = 0;
  int function_id = 0;
  Design design;
  Bits outputs;
  Pair truth_pair;
  RoleOrder role_order = RoleOrder::FirstIsA;
  std::uint64_t seed = 0;

  const logic::BooleanFunction& function() const { return logic::function_by_id(function_id); }
  /// Variable index bound to argument A / B.
  int var_a() const { return role_order == RoleOrder::FirstIsA ? truth_pair.first : truth_pair.second; }
  int var_b() const { return role_order == RoleOrder::FirstIsA ? truth_pair.second : truth_pair.first; }

  friend bool operator==(const VatInstance&, const VatInstance&) = default;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace vat

namespace vat::gen {

/// Every unordered pair that reproduces `outputs` under some argument order
/// (one order only when f is symmetric). Lexicographic order.
std::vector<Pair> check_consistent_pairs(const Design& design, std::span<const std::uint8_t> outputs,
                                         const logic::BooleanFunction& f);

/// ceil(log2(C(N,2))): smallest T with 2^T >= C(N,2).
int lower_bound_trials(int n_vars);

std::uint64_t pair_count(int n_vars);

struct GenerationFailed {
  int attempts = 0;
  std::string reason;
};

using GenerationResult = std::variant<VatInstance, GenerationFailed>;

inline constexpr int kDefaultMaxAttempts = 10'000;

/// Rejection sampler. Deterministic in (N, T, f, seed).
GenerationResult generate_instance(int n_vars, int n_trials, const logic::BooleanFunction& f,
                                   std::uint64_t seed, int max_attempts = kDefaultMaxAttempts);

struct CountedGeneration {
  GenerationResult result;
  int attempts = 0;
};

/// generate_instance, also reporting how many attempts were drawn.
CountedGeneration generate_counted(int n_vars, int n_trials, const logic::BooleanFunction& f, std::uint64_t seed,
                                   int max_attempts = kDefaultMaxAttempts);

/// Checks every VatInstance invariant; returns the violated ones (empty if valid).
std::vector<std::string> validate_instance(const VatInstance& inst);

struct TminEntry {
  int function_id = 0;
  int n_vars = 0;
  int t_min = 0;
  int attempts = 0;  // attempts used by the successful generation
};

class TminExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kTminSearchSlack = 8;

/// Smallest T >= lower_bound_trials(N) at which generate_instance succeeds
/// within `attempts_per_t` attempts.
TminEntry t_min(int n_vars, const logic::BooleanFunction& f, std::uint64_t seed,
                int attempts_per_t = kDefaultMaxAttempts);

/// Memoizes t_min per (N, f) for one seed and budget. Not thread-safe.
class TminTable {
 public:
  TminTable(std::uint64_t seed, int attempts_per_t = kDefaultMaxAttempts)
      : seed_(seed), attempts_per_t_(attempts_per_t) {}

  const TminEntry& get(int n_vars, const logic::BooleanFunction& f);
  void insert(const TminEntry& e) { cache_[{e.n_vars, e.function_id}] = e; }
  std::vector<TminEntry> entries() const;
  /// Per-N maximum over the cached functions (the f-independent convention).
  std::map<int, int> per_n_maximum() const;

  std::string to_csv() const;
  static std::vector<TminEntry> parse_csv(const std::string& text);

 private:
  std::uint64_t seed_;
  int attempts_per_t_;
  std::map<std::pair<int, int>, TminEntry> cache_;
};

struct MaterialsGrid {
  std::vector<int> n_values{3, 4, 5, 6, 7, 8, 10, 12, 14, 16};
  std::vector<int> t_offsets{0, 1, 2, 3, 4, 5};
  int samples_per_cell = 5;
  std::vector<int> function_ids{1, 2, 4, 6, 7, 8, 9, 11, 13, 14};

  std::size_t size() const {
    return function_ids.size() * n_values.size() * t_offsets.size() * static_cast<std::size_t>(samples_per_cell);
  }
  /// Throws std::invalid_argument on an unusable grid.
  void validate() const;
};

struct CellFailure {
  int function_id = 0;
  int n_vars = 0;
  int t_offset = 0;
  int replicate = 0;
  int n_trials = 0;
  GenerationFailed failure;
};

class MaterialsError : public std::runtime_error {
 public:
  explicit MaterialsError(CellFailure cell);
  const CellFailure& cell() const { return cell_; }

 private:
  CellFailure cell_;
};

struct CellStats {
  int function_id = 0;
  int n_vars = 0;
  int t_offset = 0;
  int replicate = 0;
  int n_trials = 0;
  int attempts = 0;
  bool ok = true;
};

struct Materials {
  std::vector<VatInstance> instances;
  std::vector<CellStats> cells;
  std::vector<CellFailure> failures;  // only populated when holes are allowed
};

/// Seed for one grid cell, a pure function of the master seed and coordinates.
std::uint64_t cell_seed(std::uint64_t master_seed, int function_id, int n_vars, int t_offset, int replicate);

std::string instance_id_for(int function_id, int n_vars, int t_offset, int replicate);

/// One instance per (f, N, T_min(N,f)+offset, replicate), ordered by f, N,
/// offset, replicate. Throws MaterialsError on the first failing cell unless
/// `allow_holes`, in which case failures are collected and skipped.
Materials generate_materials(const MaterialsGrid& grid, std::uint64_t master_seed, TminTable& tmin,
                             bool allow_holes = false, int max_attempts = kDefaultMaxAttempts);

}  // namespace vat::gen
