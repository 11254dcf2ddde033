#include "vat/eval/transcript.hpp"

#include <iostream>
#include <map>
#include <sstream>

#include "vat/io.hpp"

namespace vat::eval {

TranscriptLog::TranscriptLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot open transcript " + path_.string());
}

void TranscriptLog::append(const nlohmann::ordered_json& entry) {
  const std::string line = entry.dump() + "\n";
  std::lock_guard lock(mu_);
  out_ << line;
  out_.flush();
  if (!out_) throw std::runtime_error("write to transcript " + path_.string() + " failed");
}

void TranscriptLog::append_record(const EvalRecord& record) {
  nlohmann::ordered_json entry;
  entry["kind"] = "record";
  const auto body = record_to_json(record);
  for (auto& [k, v] : body.items()) entry[k] = v;
  append(entry);
}

ScanResult scan(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  ScanResult out;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string line = text.substr(pos, terminated ? nl - pos : std::string::npos);
    pos = terminated ? nl + 1 : text.size();
    ++lineno;
    if (line.empty()) continue;
    const bool last = pos >= text.size();
    nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
    if (!terminated || parsed.is_discarded() || !parsed.is_object()) {
      if (last) {
        std::cerr << "warning: " << path.string() << ": skipping truncated final line " << lineno << "\n";
        ++out.skipped_truncated;
        break;
      }
      throw std::runtime_error(path.string() + ": corrupt line " + std::to_string(lineno));
    }
    out.lines.push_back(line);
    out.entries.push_back(std::move(parsed));
  }
  return out;
}

std::vector<EvalRecord> latest_records(const ScanResult& scan) {
  std::vector<EvalRecord> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& e : scan.entries) {
    if (e.value("kind", "") != "record") continue;
    EvalRecord r = record_from_json(e);
    const auto key = std::make_pair(r.instance_id, r.model_name);
    if (auto it = index.find(key); it != index.end()) {
      out[it->second] = std::move(r);
    } else {
      index.emplace(key, out.size());
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace vat::eval
