#pragma once

#include <map>
#include <string>

#include "vat/solvers.hpp"

namespace vat::stats {

/// Resource costs in arbitrary units.
struct CostModel {
  double c_check = 1.0;  // per function evaluation
  double c_slot = 0.0;   // per stored pair per processed trial

  void validate() const;
};

/// Expected work of each strategy on one instance.
struct StrategyWork {
  double permutation_checks = 0.0;
  double elimination_checks = 0.0;
  /// Sum over processed trials of the expected number of surviving pairs.
  double elimination_slots = 0.0;
};

struct StrategyDecision {
  solve::Strategy choice = solve::Strategy::Permutation;
  double permutation_cost = 0.0;
  double elimination_cost = 0.0;
};

/// Expected work at (N, T) for a function class whose elimination runs keep
/// a fraction r = stats.mean_retention of the pairs per trial.
///
/// Permutation: each of the (M-1)/2 pairs tested before the answer (on
/// average) fails after a geometric number of trials, S(T) = (1-r^T)/(1-r)
/// checks per ordering; the accepted pair is then verified on all T trials.
///
/// Elimination: survivors after t trials are max(1, M r^t). A trial is
/// processed by evaluating f once per input pattern present among the
/// survivors (at most 4) and filtering the stored pairs, which is what the
/// slot cost charges. Both strategies read all T trials, since either one
/// must confirm its answer against every trial.
StrategyWork expected_work(int n_vars, int n_trials, const solve::PruningSummary& stats);

/// argmin of the two costs; ties go to permutation.
StrategyDecision choose_strategy(const CostModel& cost, const StrategyWork& work);

/// Throws std::out_of_range if `klass` has no pruning stats.
StrategyDecision predict_strategy(const CostModel& cost, int n_vars, int n_trials,
                                  const std::map<std::string, solve::PruningSummary>& pruning_stats,
                                  const std::string& klass);

/// Slot cost at which both strategies cost the same at (N, T). Below it
/// elimination wins.
double break_even_slot_cost(double c_check, int n_vars, int n_trials, const solve::PruningSummary& stats);

}  // namespace vat::stats
