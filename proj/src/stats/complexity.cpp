#include "vat/stats/complexity.hpp"

#include <cmath>
#include <stdexcept>

namespace vat::stats {

double information_ratio(int n_vars, int n_trials) {
  if (n_vars < 3) throw std::domain_error("information_ratio requires N >= 3");
  if (n_trials < 1) throw std::domain_error("information_ratio requires T >= 1");
  const double pairs = 0.5 * static_cast<double>(n_vars) * static_cast<double>(n_vars - 1);
  return std::ldexp(1.0, n_trials) / pairs;
}

double log_hypothesis_space(int n_vars) {
  if (n_vars < 2) throw std::domain_error("log_hypothesis_space requires N >= 2");
  return std::log(0.5 * static_cast<double>(n_vars) * static_cast<double>(n_vars - 1));
}

}  // namespace vat::stats
