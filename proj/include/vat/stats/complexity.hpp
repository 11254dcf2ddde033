#pragma once

namespace vat::stats {

/// rho = 2^T / C(N,2). Exact in double for T <= 52.
double information_ratio(int n_vars, int n_trials);

/// ln C(N,2), the log hypothesis-space size.
double log_hypothesis_space(int n_vars);

}  // namespace vat::stats
