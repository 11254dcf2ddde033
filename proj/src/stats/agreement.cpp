#include "vat/stats/agreement.hpp"

#include <stdexcept>

namespace vat::stats {

AgreementReport cohen_kappa(const Confusion& confusion) {
  const std::size_t k = confusion.size();
  if (k == 0) throw std::invalid_argument("cohen_kappa: empty confusion matrix");
  for (const auto& row : confusion)
    if (row.size() != k) throw std::invalid_argument("cohen_kappa: confusion matrix must be square");

  AgreementReport r;
  r.confusion = confusion;
  std::vector<std::uint64_t> row_sum(k, 0), col_sum(k, 0);
  std::uint64_t diag = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      row_sum[i] += confusion[i][j];
      col_sum[j] += confusion[i][j];
      r.total += confusion[i][j];
    }
    diag += confusion[i][i];
  }
  if (r.total == 0) throw std::invalid_argument("cohen_kappa: zero total");

  const double n = static_cast<double>(r.total);
  r.accuracy = static_cast<double>(diag) / n;
  double pe = 0.0;
  for (std::size_t i = 0; i < k; ++i) pe += static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[i]);
  r.expected_agreement = pe / (n * n);
  if (1.0 - r.expected_agreement > 0.0) r.kappa = (r.accuracy - r.expected_agreement) / (1.0 - r.expected_agreement);
  return r;
}

}  // namespace vat::stats
