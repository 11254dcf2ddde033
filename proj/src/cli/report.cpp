#include "vat/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "vat/io.hpp"
#include "vat/logic.hpp"
#include "vat/stats/complexity.hpp"

namespace vat::cli {

namespace {

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string class_of(const VatInstance& inst) {
  const auto& f = inst.function();
  return f.klass ? std::string(logic::to_string(*f.klass)) : "trivial";
}

struct Accuracy {
  int records = 0, correct = 0, unparsed = 0, failed = 0;
};

struct Judged {
  int elimination = 0, permutation = 0, invalid = 0, unjudged = 0;
  int judged() const { return elimination + permutation; }
  double proportion() const { return judged() ? static_cast<double>(elimination) / judged() : 0.0; }
  void add(const eval::EvalRecord& r) {
    if (!r.judge_label) {
      ++unjudged;
      return;
    }
    switch (*r.judge_label) {
      case eval::JudgeLabel::Elimination: ++elimination; break;
      case eval::JudgeLabel::Permutation: ++permutation; break;
      case eval::JudgeLabel::Invalid: ++invalid; break;
    }
  }
};

struct Mean {
  int n = 0;
  double sum = 0.0;
  double value() const { return n ? sum / n : 0.0; }
};

template <class Key>
void judged_rows(std::ostringstream& os, const std::map<Key, Judged>& groups, auto&& key_fields) {
  for (const auto& [k, g] : groups) {
    os << key_fields(k) << ',' << g.judged() << ',' << g.elimination << ',' << num(g.proportion()) << ','
       << g.invalid << ',' << g.unjudged << '\n';
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

FileSet build_reports(std::span<const eval::EvalRecord> records, std::span<const VatInstance> instances) {
  if (records.empty()) throw std::invalid_argument("report: no records");
  if (instances.empty()) throw std::invalid_argument("report: no instances");
  std::unordered_map<std::string, const VatInstance*> by_id;
  std::unordered_map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    by_id.emplace(instances[i].instance_id, &instances[i]);
    order.emplace(instances[i].instance_id, i);
  }

  // Deterministic record order: model, then dataset order.
  std::vector<const eval::EvalRecord*> sorted;
  for (const auto& r : records) {
    if (!by_id.count(r.instance_id)) throw std::invalid_argument("report: record for unknown instance " + r.instance_id);
    sorted.push_back(&r);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [&](const auto* a, const auto* b) {
    return std::tie(a->model_name, order[a->instance_id]) < std::tie(b->model_name, order[b->instance_id]);
  });

  std::map<std::tuple<std::string, int, int>, Accuracy> acc;
  std::map<std::pair<std::string, int>, Judged> elim_n, elim_t, elim_f;
  std::map<std::tuple<std::string, std::string, int>, Mean> chars_n, chars_t;
  std::map<std::string, Accuracy> acc_model;
  std::map<std::string, Judged> judged_model;
  std::ostringstream reg;
  reg << "instance_id,model,function_id,class,N,T," << io::csv_field(stats::kLogSpaceTerm) << ",rho,y\n";

  for (const auto* r : sorted) {
    const auto& inst = *by_id.at(r->instance_id);
    const std::string& m = r->model_name;
    const int N = inst.n_vars, T = inst.n_trials, fid = inst.function_id;
    const std::string klass = class_of(inst);

    for (auto* a : {&acc[{m, fid, N}], &acc_model[m]}) {
      ++a->records;
      a->correct += r->correct;
      if (r->status == eval::RecordStatus::Failed) ++a->failed;
      else if (!r->parsed_answer) ++a->unparsed;
    }
    if (r->status == eval::RecordStatus::Failed) continue;

    elim_n[{m, N}].add(*r);
    elim_t[{m, T}].add(*r);
    elim_f[{m, fid}].add(*r);
    judged_model[m].add(*r);
    for (auto* mean : {&chars_n[{m, klass, N}], &chars_t[{m, klass, T}]}) {
      ++mean->n;
      mean->sum += static_cast<double>(r->char_count_total);
    }
    if (r->judge_label && *r->judge_label != eval::JudgeLabel::Invalid) {
      reg << io::csv_field(inst.instance_id) << ',' << io::csv_field(m) << ',' << fid << ',' << klass << ',' << N << ','
          << T << ',' << num(stats::log_hypothesis_space(N), 9) << ',' << num(stats::information_ratio(N, T), 9) << ','
          << (*r->judge_label == eval::JudgeLabel::Elimination ? 1 : 0) << '\n';
    }
  }

  FileSet files;
  {
    std::ostringstream os;
    os << "model,function_id,function,N,records,correct,accuracy,unparsed,failed\n";
    for (const auto& [k, a] : acc) {
      const auto& [m, fid, N] = k;
      os << io::csv_field(m) << ',' << fid << ',' << io::csv_field(logic::function_by_id(fid).name) << ',' << N << ','
         << a.records << ',' << a.correct << ',' << num(static_cast<double>(a.correct) / a.records) << ','
         << a.unparsed << ',' << a.failed << '\n';
    }
    files.emplace_back("accuracy_by_function_n.csv", os.str());
  }
  const std::string judged_header = "judged,elimination,proportion,invalid,unjudged\n";
  {
    std::ostringstream os;
    os << "model,N," << judged_header;
    judged_rows(os, elim_n, [](const auto& k) { return io::csv_field(k.first) + "," + std::to_string(k.second); });
    files.emplace_back("elimination_by_n.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "model,T," << judged_header;
    judged_rows(os, elim_t, [](const auto& k) { return io::csv_field(k.first) + "," + std::to_string(k.second); });
    files.emplace_back("elimination_by_t.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "model,function_id,function," << judged_header;
    judged_rows(os, elim_f, [](const auto& k) {
      return io::csv_field(k.first) + "," + std::to_string(k.second) + "," +
             io::csv_field(logic::function_by_id(k.second).name);
    });
    files.emplace_back("elimination_by_function.csv", os.str());
  }
  for (const auto& [name, axis, groups] :
       {std::tuple{"chars_by_n.csv", "N", &chars_n}, std::tuple{"chars_by_t.csv", "T", &chars_t}}) {
    std::ostringstream os;
    os << "model,class," << axis << ",records,mean_chars\n";
    for (const auto& [k, mean] : *groups) {
      const auto& [m, klass, v] = k;
      os << io::csv_field(m) << ',' << klass << ',' << v << ',' << mean.n << ',' << num(mean.value(), 3) << '\n';
    }
    files.emplace_back(name, os.str());
  }
  files.emplace_back("regression_table.csv", reg.str());

  {
    std::ostringstream md;
    md << "# Evaluation summary\n\n";
    md << "| model | records | parsed | accuracy | failed | elimination share | invalid | unjudged |\n";
    md << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& [m, a] : acc_model) {
      const auto& j = judged_model[m];
      const int parsed = a.records - a.unparsed - a.failed;
      md << "| " << m << " | " << a.records << " | " << num(static_cast<double>(parsed) / a.records, 4) << " | "
         << num(static_cast<double>(a.correct) / a.records, 4) << " | " << a.failed << " | "
         << (j.judged() ? num(j.proportion(), 4) : std::string("n/a")) << " | " << j.invalid << " | " << j.unjudged
         << " |\n";
    }
    md << "\nElimination share = ELIMINATION / (ELIMINATION + PERMUTATION). Unparseable answers count as incorrect.\n";
    md << "\n## Accuracy by function\n\n| model | function | accuracy |\n|---|---|---|\n";
    std::map<std::pair<std::string, int>, Accuracy> by_f;
    for (const auto& [k, a] : acc) {
      auto& t = by_f[{std::get<0>(k), std::get<1>(k)}];
      t.records += a.records;
      t.correct += a.correct;
    }
    for (const auto& [k, a] : by_f)
      md << "| " << k.first << " | " << logic::function_by_id(k.second).name << " | "
         << num(static_cast<double>(a.correct) / a.records, 4) << " |\n";
    files.emplace_back("summary.md", md.str());
  }
  return files;
}

RegressionInput parse_regression_table(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("regression table is empty");
  const auto header = split_csv_line(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::invalid_argument("regression table lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto cn = col("N"), ct = col("T"), cy = col("y");
  RegressionInput out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw std::invalid_argument("regression table line " + std::to_string(lineno));
    try {
      out.rows.push_back({std::stoi(f[cy]), std::stoi(f[cn]), std::stoi(f[ct])});
    } catch (const std::exception&) {
      throw std::invalid_argument("regression table line " + std::to_string(lineno));
    }
  }
  return out;
}

std::string mean_path_csv(const RegressionInput& input) {
  std::map<int, Mean> by_n;
  for (const auto& r : input.rows) {
    ++by_n[r.n_vars].n;
    by_n[r.n_vars].sum += r.n_trials;
  }
  std::ostringstream os;
  os << "N,mean_T\n";
  for (const auto& [n, m] : by_n) os << n << ',' << num(m.value(), 4) << '\n';
  return os.str();
}

}  // namespace vat::cli
