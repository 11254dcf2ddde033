#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vat::stats {

/// Strategy-selection models compared in the model-comparison table.
enum class ModelSpec {
  Interaction,  // y ~ log C(N,2) * T
  Additive,     // y ~ log C(N,2) + T
  LogSpace,     // y ~ log C(N,2)
  Rho,          // y ~ rho
  Trials,       // y ~ T
  LogRho,       // y ~ log rho (alternative reading of the rho model)
};

inline constexpr const char* kLogSpaceTerm = "log_C(N,2)";
inline constexpr const char* kTrialsTerm = "T";
inline constexpr const char* kInteractionTerm = "log_C(N,2):T";

std::string model_name(ModelSpec spec);
ModelSpec model_from_name(const std::string& name);

/// The five standard specs: interaction, additive, log-space, rho (or log rho), trials.
std::vector<ModelSpec> standard_models(bool log_rho = false);

/// One observation: y = 1 when the response used elimination.
struct RegressionRow {
  int y = 0;
  int n_vars = 0;
  int n_trials = 0;
};

struct NamedColumn {
  std::string name;
  std::vector<double> values;
};

struct RegressionFit {
  std::string model;
  std::optional<ModelSpec> spec;
  /// "(Intercept)" followed by predictor names.
  std::vector<std::string> terms;
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> z_values;
  std::vector<double> wald_p;
  double log_lik = 0.0;
  double log_lik_null = 0.0;
  double aic = 0.0;
  /// McFadden: 1 - log_lik / log_lik_null.
  double pseudo_r2 = 0.0;
  std::size_t n_obs = 0;
  bool converged = false;
  int iterations = 0;
  /// Means subtracted from the main predictors, aligned with `center_names`.
  std::vector<std::string> center_names;
  std::vector<double> centers;

  std::size_t parameters() const { return coefficients.size(); }
  double center_of(const std::string& name) const;
  double coefficient_of(const std::string& term) const;
};

class FitError : public std::runtime_error {
 public:
  enum class Kind { Degenerate, NonConvergence, RankDeficient, BadInput };
  FitError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct IrlsOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 100;
  /// Any |beta| above this is treated as (quasi-)separation.
  double separation_threshold = 30.0;
};

/// Logistic regression by iteratively reweighted least squares on the given
/// columns (an intercept is added). Columns are used as-is.
RegressionFit fit_design(std::span<const int> y, std::span<const NamedColumn> columns, const std::string& model,
                         const IrlsOptions& options = {});

/// Builds the predictors for `spec`, mean-centers the main effects, forms the
/// interaction from the centered mains and fits.
RegressionFit fit_logistic(std::span<const RegressionRow> rows, ModelSpec spec, const IrlsOptions& options = {});

struct ComparisonRow {
  std::string model;
  double aic = 0.0;
  double pseudo_r2 = 0.0;
  std::string wald_summary;
  std::size_t n_obs = 0;
};

/// Sorts fits by ascending AIC. Throws std::invalid_argument if the fits were
/// made on different numbers of observations.
std::vector<ComparisonRow> compare_models(std::span<const RegressionFit> fits);

/// "model,AIC,pseudo_R2,wald_p" table.
std::string comparison_csv(std::span<const ComparisonRow> rows);

/// Summarizes slope p-values, e.g. "<0.001 (all)".
std::string wald_summary(const RegressionFit& fit);

}  // namespace vat::stats
