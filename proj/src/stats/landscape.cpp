#include "vat/stats/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "vat/stats/complexity.hpp"

namespace vat::stats {

Landscape decision_landscape(const RegressionFit& fit, std::span<const int> n_values, std::span<const int> t_values) {
  if (fit.spec != ModelSpec::Interaction)
    throw std::invalid_argument("decision_landscape needs the interaction model, got " + fit.model);
  if (n_values.empty() || t_values.empty()) throw std::invalid_argument("decision_landscape: empty grid");

  const double b0 = fit.coefficient_of("(Intercept)");
  const double b_space = fit.coefficient_of(kLogSpaceTerm);
  const double b_trials = fit.coefficient_of(kTrialsTerm);
  const double b_inter = fit.coefficient_of(kInteractionTerm);
  const double c_space = fit.center_of(kLogSpaceTerm);
  const double c_trials = fit.center_of(kTrialsTerm);

  Landscape out;
  for (int n : n_values) {
    const double x1 = log_hypothesis_space(n) - c_space;
    for (int t : t_values) {
      const double x2 = static_cast<double>(t) - c_trials;
      const double eta = b0 + b_space * x1 + b_trials * x2 + b_inter * x1 * x2;
      out.cells.push_back({n, t, x1 + c_space, 1.0 / (1.0 + std::exp(-eta))});
    }
    // eta is linear in T at fixed N, so the 0.5 crossing is closed-form
    const double slope = b_trials + b_inter * x1;
    if (std::abs(slope) < 1e-12) continue;
    const double t_star = c_trials - (b0 + b_space * x1) / slope;
    const auto [lo, hi] = std::minmax_element(t_values.begin(), t_values.end());
    if (t_star >= *lo && t_star <= *hi) out.contour.push_back({n, t_star});
  }
  return out;
}

std::string landscape_csv(const Landscape& landscape) {
  std::ostringstream os;
  os << "N,T,log_C(N,2),probability\n";
  char buf[96];
  for (const auto& c : landscape.cells) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f\n", c.n_vars, c.n_trials, c.log_space, c.probability);
    os << buf;
  }
  return os.str();
}

std::string contour_csv(const Landscape& landscape) {
  std::ostringstream os;
  os << "N,T_at_p50\n";
  char buf[64];
  for (const auto& c : landscape.contour) {
    std::snprintf(buf, sizeof buf, "%d,%.4f\n", c.n_vars, c.n_trials);
    os << buf;
  }
  return os.str();
}

}  // namespace vat::stats
