#include "vat/stats/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "vat/stats/complexity.hpp"

namespace vat::stats {

namespace {

constexpr const char* kLogSpace = kLogSpaceTerm;
constexpr const char* kTrials = kTrialsTerm;
constexpr const char* kRho = "rho";
constexpr const char* kLogRho = "log_rho";

// log(1 + e^x) without overflow
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - softplus(eta(i));
  return ll;
}

std::vector<double> centered(std::vector<double> v, double& mean) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (auto& x : v) x -= mean;
  return v;
}

std::string format_p(double p) {
  if (p < 0.001) return "<0.001";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", p);
  return buf;
}

}  // namespace

std::string model_name(ModelSpec spec) {
  switch (spec) {
    case ModelSpec::Interaction: return "Elimination ~ log C(N,2) * T";
    case ModelSpec::Additive: return "Elimination ~ log C(N,2) + T";
    case ModelSpec::LogSpace: return "Elimination ~ log C(N,2)";
    case ModelSpec::Rho: return "Elimination ~ rho";
    case ModelSpec::Trials: return "Elimination ~ T";
    case ModelSpec::LogRho: return "Elimination ~ log rho";
  }
  return "?";
}

ModelSpec model_from_name(const std::string& name) {
  for (auto s : {ModelSpec::Interaction, ModelSpec::Additive, ModelSpec::LogSpace, ModelSpec::Rho, ModelSpec::Trials,
                 ModelSpec::LogRho})
    if (model_name(s) == name) return s;
  throw std::invalid_argument("unknown model: " + name);
}

std::vector<ModelSpec> standard_models(bool log_rho) {
  return {ModelSpec::Interaction, ModelSpec::Additive, ModelSpec::LogSpace, log_rho ? ModelSpec::LogRho : ModelSpec::Rho,
          ModelSpec::Trials};
}

double RegressionFit::center_of(const std::string& name) const {
  for (std::size_t i = 0; i < center_names.size(); ++i)
    if (center_names[i] == name) return centers[i];
  throw std::out_of_range("fit has no centered predictor " + name);
}

double RegressionFit::coefficient_of(const std::string& term) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i] == term) return coefficients[i];
  throw std::out_of_range("fit has no term " + term);
}

RegressionFit fit_design(std::span<const int> y_in, std::span<const NamedColumn> columns, const std::string& model,
                         const IrlsOptions& options) {
  const auto n = static_cast<Eigen::Index>(y_in.size());
  const auto p = static_cast<Eigen::Index>(columns.size() + 1);
  if (n == 0) throw FitError(FitError::Kind::BadInput, "no observations");

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int v = y_in[static_cast<std::size_t>(i)];
    if (v != 0 && v != 1) throw FitError(FitError::Kind::BadInput, "response must be 0/1");
    y(i) = v;
  }
  const double ybar = y.mean();
  if (ybar == 0.0 || ybar == 1.0) throw FitError(FitError::Kind::Degenerate, "response has no variation");

  Eigen::MatrixXd X(n, p);
  X.col(0).setOnes();
  for (Eigen::Index j = 1; j < p; ++j) {
    const auto& col = columns[static_cast<std::size_t>(j - 1)];
    if (static_cast<Eigen::Index>(col.values.size()) != n)
      throw FitError(FitError::Kind::BadInput, "column " + col.name + " has wrong length");
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = col.values[static_cast<std::size_t>(i)];
      if (!std::isfinite(v)) throw FitError(FitError::Kind::BadInput, "non-finite value in " + col.name);
      X(i, j) = v;
    }
  }
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) throw FitError(FitError::Kind::RankDeficient, "design matrix is rank deficient");
  }

  RegressionFit fit;
  fit.model = model;
  fit.n_obs = static_cast<std::size_t>(n);
  fit.terms.emplace_back("(Intercept)");
  for (const auto& c : columns) fit.terms.push_back(c.name);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta = X * beta;
  double ll = log_likelihood(eta, y);
  Eigen::MatrixXd info(p, p);

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    Eigen::VectorXd mu = eta.unaryExpr(&sigmoid);
    Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    Eigen::VectorXd grad = X.transpose() * (y - mu);
    info = X.transpose() * w.asDiagonal() * X;
    fit.iterations = iter;
    if (grad.norm() < options.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    if (iter == options.max_iterations) break;

    Eigen::VectorXd step = info.ldlt().solve(grad);
    Eigen::VectorXd next = beta + step;
    Eigen::VectorXd next_eta = X * next;
    double next_ll = log_likelihood(next_eta, y);
    // step halving keeps the likelihood monotone
    for (int k = 0; k < 30 && next_ll < ll - 1e-12; ++k) {
      step *= 0.5;
      next = beta + step;
      next_eta = X * next;
      next_ll = log_likelihood(next_eta, y);
    }
    beta = next;
    eta = next_eta;
    ll = next_ll;
    if (beta.cwiseAbs().maxCoeff() > options.separation_threshold)
      throw FitError(FitError::Kind::NonConvergence,
                     model + ": |beta| exceeded " + std::to_string(options.separation_threshold) + " (separation)");
  }

  // The gradient can vanish under complete separation before |beta| grows
  // past the threshold.
  if ((y - eta.unaryExpr(&sigmoid)).cwiseAbs().maxCoeff() < 1e-6)
    throw FitError(FitError::Kind::NonConvergence, model + ": outcomes perfectly separated");

  const Eigen::MatrixXd cov = info.inverse();
  fit.coefficients.assign(beta.data(), beta.data() + p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double se = std::sqrt(cov(j, j));
    const double z = beta(j) / se;
    fit.std_errors.push_back(se);
    fit.z_values.push_back(z);
    fit.wald_p.push_back(std::erfc(std::abs(z) / std::sqrt(2.0)));
  }
  fit.log_lik = ll;
  fit.log_lik_null = static_cast<double>(n) * (ybar * std::log(ybar) + (1.0 - ybar) * std::log(1.0 - ybar));
  fit.aic = 2.0 * static_cast<double>(p) - 2.0 * ll;
  fit.pseudo_r2 = 1.0 - ll / fit.log_lik_null;
  return fit;
}

RegressionFit fit_logistic(std::span<const RegressionRow> rows, ModelSpec spec, const IrlsOptions& options) {
  if (rows.empty()) throw FitError(FitError::Kind::BadInput, "no observations");
  std::vector<int> y;
  std::vector<double> logc, trials, rho;
  y.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.n_vars < 3 || r.n_trials < 1) throw FitError(FitError::Kind::BadInput, "row outside N>=3, T>=1");
    y.push_back(r.y);
    logc.push_back(log_hypothesis_space(r.n_vars));
    trials.push_back(r.n_trials);
    rho.push_back(information_ratio(r.n_vars, r.n_trials));
  }

  std::vector<NamedColumn> cols;
  std::vector<std::string> center_names;
  std::vector<double> centers;
  auto add_main = [&](const char* name, const std::vector<double>& raw) {
    double mean = 0;
    cols.push_back({name, centered(raw, mean)});
    center_names.emplace_back(name);
    centers.push_back(mean);
  };

  switch (spec) {
    case ModelSpec::Interaction: {
      add_main(kLogSpace, logc);
      add_main(kTrials, trials);
      std::vector<double> prod(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) prod[i] = cols[0].values[i] * cols[1].values[i];
      cols.push_back({kInteractionTerm, std::move(prod)});
      break;
    }
    case ModelSpec::Additive:
      add_main(kLogSpace, logc);
      add_main(kTrials, trials);
      break;
    case ModelSpec::LogSpace: add_main(kLogSpace, logc); break;
    case ModelSpec::Rho: add_main(kRho, rho); break;
    case ModelSpec::LogRho: {
      std::vector<double> lr(rho.size());
      std::transform(rho.begin(), rho.end(), lr.begin(), [](double r) { return std::log(r); });
      add_main(kLogRho, lr);
      break;
    }
    case ModelSpec::Trials: add_main(kTrials, trials); break;
  }

  RegressionFit fit = fit_design(y, cols, model_name(spec), options);
  fit.spec = spec;
  fit.center_names = std::move(center_names);
  fit.centers = std::move(centers);
  return fit;
}

std::string wald_summary(const RegressionFit& fit) {
  if (fit.wald_p.size() <= 1) return "";
  const bool all_small = std::all_of(fit.wald_p.begin() + 1, fit.wald_p.end(), [](double p) { return p < 0.001; });
  if (all_small) return fit.wald_p.size() > 2 ? "<0.001 (all)" : "<0.001";
  std::string out;
  for (std::size_t i = 1; i < fit.wald_p.size(); ++i) {
    if (i > 1) out += "; ";
    out += fit.terms[i] + " " + format_p(fit.wald_p[i]);
  }
  return out;
}

std::vector<ComparisonRow> compare_models(std::span<const RegressionFit> fits) {
  std::vector<ComparisonRow> rows;
  for (const auto& f : fits) {
    if (!rows.empty() && f.n_obs != rows.front().n_obs)
      throw std::invalid_argument("compare_models: fits use different observations (" + std::to_string(f.n_obs) +
                                  " vs " + std::to_string(rows.front().n_obs) + ")");
    rows.push_back({f.model, f.aic, f.pseudo_r2, wald_summary(f), f.n_obs});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.aic < b.aic; });
  return rows;
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::ostringstream os;
  os << "model,AIC,pseudo_R2,wald_p\n";
  char buf[64];
  for (const auto& r : rows) {
    os << '"' << r.model << "\",";
    std::snprintf(buf, sizeof buf, "%.2f,%.3f,", r.aic, r.pseudo_r2);
    os << buf << '"' << r.wald_summary << "\"\n";
  }
  return os.str();
}

}  // namespace vat::stats
