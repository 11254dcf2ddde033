#pragma once

#include <span>
#include <string>
#include <vector>

#include "vat/stats/regression.hpp"

namespace vat::stats {

struct LandscapeCell {
  int n_vars = 0;
  int n_trials = 0;
  double log_space = 0.0;
  double probability = 0.0;
};

/// Point on the 50% decision boundary: at this N, P(elimination) = 0.5 at
/// a (real-valued) trial count.
struct ContourPoint {
  int n_vars = 0;
  double n_trials = 0.0;
};

struct Landscape {
  std::vector<LandscapeCell> cells;  // N-major
  std::vector<ContourPoint> contour;
};

/// P(elimination) from an interaction-model fit over the (N, T) grid, using
/// the fit's own centering. Throws std::invalid_argument for other models.
Landscape decision_landscape(const RegressionFit& fit, std::span<const int> n_values, std::span<const int> t_values);

std::string landscape_csv(const Landscape& landscape);
std::string contour_csv(const Landscape& landscape);

}  // namespace vat::stats
