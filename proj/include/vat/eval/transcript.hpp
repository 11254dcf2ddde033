#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vat/eval/record.hpp"

namespace vat::eval {

/// Append-only JSONL log. Every line is one JSON object with a "kind" of
/// "attempt" (raw endpoint exchange) or "record" (graded EvalRecord); later
/// records for the same (instance_id, model_name) supersede earlier ones.
///
/// One TranscriptLog per file. append() may be called from several threads;
/// lines are serialized through an internal lock and flushed individually.
class TranscriptLog {
 public:
  explicit TranscriptLog(std::filesystem::path path);

  void append(const nlohmann::ordered_json& entry);
  void append_record(const EvalRecord& record);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mu_;
};

struct ScanResult {
  std::vector<std::string> lines;  // raw, without the newline
  std::vector<nlohmann::json> entries;
  std::size_t skipped_truncated = 0;
};

/// Reads a transcript. A final line that is unterminated or unparseable is
/// skipped with a warning on stderr; a bad line anywhere else throws
/// std::runtime_error, as does an unreadable file.
ScanResult scan(const std::filesystem::path& path);

/// The latest "record" entry per (instance_id, model_name), in first-seen order.
std::vector<EvalRecord> latest_records(const ScanResult& scan);

}  // namespace vat::eval
