#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>

#include "vat/cli/config.hpp"

namespace vat::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitGeneration = 3,
  kExitEndpoint = 4,
  kExitFit = 5,
  kExitInvalidInstance = 6,
};

/// Fixed run-directory layout.
struct RunPaths {
  explicit RunPaths(const RunConfig& c);

  std::filesystem::path root;
  std::filesystem::path config;       // config.resolved
  std::filesystem::path metadata;     // metadata.json (timestamps)
  std::filesystem::path instances;    // instances.jsonl, or the --dataset file
  std::filesystem::path tmin;         // tmin.csv
  std::filesystem::path gen_report;   // gen_report.csv
  std::filesystem::path prompts;      // prompts.jsonl
  std::filesystem::path traces;       // traces/
  std::filesystem::path transcripts;  // transcripts/
  std::filesystem::path reports;      // reports/

  std::filesystem::path transcript_for(const std::string& model_name) const;
};

/// Instances JSONL, T_min CSV and per-cell generation report.
int cmd_gen(const RunConfig& c);
/// T_min table alone for the grid's N values and functions.
int cmd_tmin(const RunConfig& c);
/// Solver traces, agreement summary and pruning profile under traces/.
int cmd_solve(const RunConfig& c);
/// Renders prompts.jsonl from the dataset.
int cmd_export(const RunConfig& c);
/// Sends the prompts to the model endpoint (or the mock) and grades replies.
int cmd_run(const RunConfig& c);
/// Labels each transcript's latest successful records with the judge.
int cmd_judge(const RunConfig& c);
/// Report CSVs and summary.md from all transcripts.
int cmd_report(const RunConfig& c);
/// Fits every model spec on reports/regression_table.csv.
int cmd_fit(const RunConfig& c);
/// Interaction-model landscape, 0.5 contour and mean path.
int cmd_landscape(const RunConfig& c);
/// Cost-model strategy predictions over the grid.
int cmd_costmap(const RunConfig& c);

/// Runs `command`, printing any error to stderr and mapping it to an exit code.
int guarded(const std::string& name, const std::function<int()>& command);

}  // namespace vat::cli
