#include "vat/stats/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vat/instance.hpp"

namespace vat::stats {

void CostModel::validate() const {
  if (!(c_check >= 0.0) || !(c_slot >= 0.0)) throw std::invalid_argument("cost parameters must be nonnegative");
}

StrategyWork expected_work(int n_vars, int n_trials, const solve::PruningSummary& stats) {
  if (n_vars < 3 || n_trials < 1) throw std::domain_error("expected_work requires N >= 3 and T >= 1");
  const double pairs = static_cast<double>(gen::pair_count(n_vars));
  const double orders = std::max(1.0, stats.hypotheses_per_pair);
  const double r = std::clamp(stats.mean_retention, 1e-9, 1.0 - 1e-9);
  const double t = static_cast<double>(n_trials);

  StrategyWork w;
  const double per_ordering = (1.0 - std::pow(r, t)) / (1.0 - r);
  w.permutation_checks = 0.5 * (pairs - 1.0) * orders * per_ordering + 0.5 * (orders - 1.0) * per_ordering + t;

  double survivors = pairs;
  for (int k = 1; k <= n_trials; ++k) {
    w.elimination_checks += std::min(4.0, orders * survivors);
    survivors = std::max(1.0, pairs * std::pow(r, k));
    w.elimination_slots += survivors;
  }
  return w;
}

StrategyDecision choose_strategy(const CostModel& cost, const StrategyWork& work) {
  cost.validate();
  StrategyDecision d;
  d.permutation_cost = cost.c_check * work.permutation_checks;
  d.elimination_cost = cost.c_check * work.elimination_checks + cost.c_slot * work.elimination_slots;
  d.choice = d.elimination_cost < d.permutation_cost ? solve::Strategy::Elimination : solve::Strategy::Permutation;
  return d;
}

StrategyDecision predict_strategy(const CostModel& cost, int n_vars, int n_trials,
                                  const std::map<std::string, solve::PruningSummary>& pruning_stats,
                                  const std::string& klass) {
  const auto it = pruning_stats.find(klass);
  if (it == pruning_stats.end()) throw std::out_of_range("no pruning stats for class " + klass);
  return choose_strategy(cost, expected_work(n_vars, n_trials, it->second));
}

double break_even_slot_cost(double c_check, int n_vars, int n_trials, const solve::PruningSummary& stats) {
  const auto w = expected_work(n_vars, n_trials, stats);
  return c_check * (w.permutation_checks - w.elimination_checks) / w.elimination_slots;
}

}  // namespace vat::stats
