#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vat/instance.hpp"
#include "vat/logic.hpp"

namespace vat::solve {

enum class Strategy { Permutation, Elimination };

std::string_view to_string(Strategy s);

/// Instrumented record of one solver run.
struct SolveTrace {
  Strategy strategy = Strategy::Permutation;
  Pair predicted_pair;
  /// Single-trial function evaluations.
  std::uint64_t consistency_checks = 0;
  int trials_processed = 0;
  /// Elimination only: distinct unordered pairs still alive after each trial.
  std::vector<std::uint64_t> surviving_counts;
  /// Hypotheses held at once: 1 for permutation, the initial (ordered)
  /// hypothesis count for elimination.
  std::uint64_t peak_working_set = 0;
  /// Permutation: 0-based lexicographic index of the accepted pair.
  /// Elimination: 0-based index of the trial that left a single pair.
  int resolved_at = 0;
  /// Unordered pairs before any evidence, C(N,2).
  std::uint64_t initial_pairs = 0;
};

/// No hypothesis survives the trials.
class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// More than one unordered pair survives every trial.
class Ambiguous : public std::runtime_error {
 public:
  Ambiguous(const std::string& what, std::uint64_t survivors) : std::runtime_error(what), survivors_(survivors) {}
  std::uint64_t survivors() const { return survivors_; }

 private:
  std::uint64_t survivors_;
};

/// Serial hypothesis testing: visits pairs in lexicographic order, abandons
/// a candidate at its first failing trial and returns the first pair that
/// passes every trial. Does not check uniqueness.
///
/// Throws NoSolution when no pair is consistent.
SolveTrace solve_permutation(const Design& design, std::span<const std::uint8_t> outputs,
                             const logic::BooleanFunction& f);

/// Trial-by-trial pruning of the full hypothesis set. Asymmetric functions
/// start from both argument orders of every pair. Stops as soon as a single
/// unordered pair is left, so trials after that point are not inspected.
///
/// Throws NoSolution if the set empties and Ambiguous if several pairs
/// survive all trials.
SolveTrace solve_elimination(const Design& design, std::span<const std::uint8_t> outputs,
                             const logic::BooleanFunction& f);

SolveTrace solve(Strategy s, const VatInstance& inst);

/// Mean of surviving_counts normalized by the initial pair count:
/// sum(counts) / (len(counts) * C(N,2)). Lower means faster convergence.
double normalized_area(const SolveTrace& trace);

struct PruningSummary {
  std::size_t traces = 0;
  double mean_trials_to_singleton = 0.0;
  double mean_area = 0.0;
  /// Geometric-mean fraction of pairs kept per processed trial.
  double mean_retention = 1.0;
  /// Share of orderings tested per pair (2 for asymmetric, 1 for symmetric).
  double hypotheses_per_pair = 1.0;
};

/// Groups elimination traces by `group_keys[i]` and summarizes each group.
/// Throws std::invalid_argument on empty input, mismatched lengths or a
/// non-elimination trace.
std::map<std::string, PruningSummary> pruning_profile(std::span<const SolveTrace> traces,
                                                      std::span<const std::string> group_keys);

}  // namespace vat::solve
