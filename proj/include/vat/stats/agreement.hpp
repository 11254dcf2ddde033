#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace vat::stats {

/// Square count matrix, rows = first rater (judge), columns = second (human).
using Confusion = std::vector<std::vector<std::uint64_t>>;

struct AgreementReport {
  Confusion confusion;
  std::uint64_t total = 0;
  double accuracy = 0.0;           // observed agreement p_o
  double expected_agreement = 0.0;  // p_e from the marginals
  /// Cohen's kappa; empty when p_e == 1 (kappa undefined).
  std::optional<double> kappa;
};

/// Throws std::invalid_argument for a non-square or empty-total matrix.
AgreementReport cohen_kappa(const Confusion& confusion);

}  // namespace vat::stats
