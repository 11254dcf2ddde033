#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vat/eval/record.hpp"
#include "vat/instance.hpp"
#include "vat/stats/regression.hpp"

namespace vat::cli {

/// (file name, contents) pairs in a fixed order.
using FileSet = std::vector<std::pair<std::string, std::string>>;

/// Report tables from graded, judged records joined with their instances.
/// Records whose instance is missing from `instances` are an error.
///
/// accuracy_by_function_n.csv   model,function_id,function,N,records,correct,accuracy,unparsed,failed
/// elimination_by_n.csv         model,N,judged,elimination,proportion,invalid,unjudged
/// elimination_by_t.csv         model,T,...
/// elimination_by_function.csv  model,function_id,function,...
/// chars_by_n.csv               model,class,N,records,mean_chars
/// chars_by_t.csv               model,class,T,records,mean_chars
/// regression_table.csv         instance_id,model,function_id,class,N,T,log_C(N,2),rho,y
/// summary.md
///
/// Elimination proportions use Permutation + Elimination labels as the
/// denominator; Invalid and unjudged records are counted beside it.
FileSet build_reports(std::span<const eval::EvalRecord> records, std::span<const VatInstance> instances);

struct RegressionInput {
  std::vector<stats::RegressionRow> rows;
};

/// Reads regression_table.csv as written by build_reports.
RegressionInput parse_regression_table(const std::string& csv);

/// "N,mean_T": mean trial count per N over the table rows.
std::string mean_path_csv(const RegressionInput& input);

}  // namespace vat::cli
