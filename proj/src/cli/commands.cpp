#include "vat/cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "vat/cli/report.hpp"
#include "vat/eval/batch.hpp"
#include "vat/eval/mock_server.hpp"
#include "vat/eval/transcript.hpp"
#include "vat/io.hpp"
#include "vat/logic.hpp"
#include "vat/solvers.hpp"
#include "vat/stats/complexity.hpp"
#include "vat/stats/cost_model.hpp"
#include "vat/stats/landscape.hpp"
#include "vat/stats/regression.hpp"

namespace vat::cli {

namespace fs = std::filesystem;

namespace {

class EndpointFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstances : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string class_of(int function_id) {
  const auto& f = logic::function_by_id(function_id);
  return f.klass ? std::string(logic::to_string(*f.klass)) : "trivial";
}

/// Validates the config, writes config.resolved and records the command's
/// start and finish times in metadata.json.
class CommandScope {
 public:
  CommandScope(const RunConfig& c, std::string name) : paths_(c), name_(std::move(name)), started_(eval::utc_timestamp()) {
    c.validate();
    fs::create_directories(paths_.root);
    io::write_file(paths_.config, config_to_json(c).dump(2) + "\n");
  }
  ~CommandScope() {
    try {
      nlohmann::ordered_json meta = nlohmann::ordered_json::object();
      if (fs::exists(paths_.metadata)) {
        auto parsed = nlohmann::ordered_json::parse(io::read_file(paths_.metadata), nullptr, false);
        if (parsed.is_object()) meta = std::move(parsed);
      }
      meta[name_] = {{"started_at", started_}, {"finished_at", eval::utc_timestamp()}};
      io::write_file(paths_.metadata, meta.dump(2) + "\n");
    } catch (...) {
    }
  }
  const RunPaths& paths() const { return paths_; }

 private:
  RunPaths paths_;
  std::string name_;
  std::string started_;
};

std::vector<VatInstance> load_dataset(const RunPaths& p) {
  if (!fs::exists(p.instances)) throw ConfigError("dataset not found: " + p.instances.string());
  return io::read_instances(p.instances);
}

std::vector<eval::PromptRendering> load_prompts(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("prompts not found: " + path.string() + " (run export first)");
  std::vector<eval::PromptRendering> out;
  std::istringstream in(io::read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    out.push_back({j.at("instance_id").get<std::string>(), eval::prompt_mode_from_string(j.at("mode").get<std::string>()),
                   j.at("text").get<std::string>(), j.at("template_version").get<std::string>()});
  }
  return out;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char ch : name) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '.') ? ch : '_';
  return out.empty() ? "model" : out;
}

std::vector<eval::EvalRecord> all_latest_records(const RunPaths& p) {
  std::vector<eval::EvalRecord> records;
  if (!fs::exists(p.transcripts)) return records;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(p.transcripts))
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto latest = eval::latest_records(eval::scan(f));
    records.insert(records.end(), latest.begin(), latest.end());
  }
  return records;
}

std::vector<stats::RegressionFit> fits_or_errors(const std::vector<stats::RegressionRow>& rows, bool log_rho,
                                                 std::ostringstream& errors, bool& any_failed) {
  std::vector<stats::RegressionFit> fits;
  for (const auto spec : stats::standard_models(log_rho)) {
    const auto name = stats::model_name(spec);
    try {
      auto fit = stats::fit_logistic(rows, spec);
      if (!fit.converged) {
        any_failed = true;
        errors << io::csv_field(name) << ",NonConvergence,no convergence after " << fit.iterations << " iterations\n";
      }
      fits.push_back(std::move(fit));
    } catch (const stats::FitError& e) {
      any_failed = true;
      static const char* kinds[] = {"Degenerate", "NonConvergence", "RankDeficient", "BadInput"};
      errors << io::csv_field(name) << ',' << kinds[static_cast<int>(e.kind())] << ',' << io::csv_field(e.what()) << '\n';
      std::cerr << "fit: " << e.what() << "\n";
    }
  }
  return fits;
}

nlohmann::ordered_json fit_to_json(const stats::RegressionFit& f) {
  nlohmann::ordered_json j;
  j["model"] = f.model;
  j["n_obs"] = f.n_obs;
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["log_lik"] = f.log_lik;
  j["log_lik_null"] = f.log_lik_null;
  j["aic"] = f.aic;
  j["pseudo_r2"] = f.pseudo_r2;
  auto terms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    terms.push_back({{"term", f.terms[i]},
                     {"estimate", f.coefficients[i]},
                     {"std_error", f.std_errors[i]},
                     {"z", f.z_values[i]},
                     {"p", f.wald_p[i]}});
  }
  j["terms"] = terms;
  auto centers = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < f.center_names.size(); ++i) centers[f.center_names[i]] = f.centers[i];
  j["centers"] = centers;
  return j;
}

std::vector<stats::RegressionRow> load_regression_rows(const RunPaths& p) {
  const auto path = p.reports / "regression_table.csv";
  if (!fs::exists(path)) throw ConfigError("regression table not found: " + path.string() + " (run report first)");
  return parse_regression_table(io::read_file(path)).rows;
}

}  // namespace

RunPaths::RunPaths(const RunConfig& c)
    : root(c.out_dir),
      config(c.out_dir / "config.resolved"),
      metadata(c.out_dir / "metadata.json"),
      instances(c.dataset.empty() ? c.out_dir / "instances.jsonl" : c.dataset),
      tmin(c.out_dir / "tmin.csv"),
      gen_report(c.out_dir / "gen_report.csv"),
      prompts(c.out_dir / "prompts.jsonl"),
      traces(c.out_dir / "traces"),
      transcripts(c.out_dir / "transcripts"),
      reports(c.out_dir / "reports") {}

fs::path RunPaths::transcript_for(const std::string& model_name) const {
  return transcripts / (sanitize(model_name) + ".jsonl");
}

int cmd_gen(const RunConfig& c) {
  CommandScope scope(c, "gen");
  const auto& p = scope.paths();
  gen::TminTable tmin(c.master_seed, c.max_attempts);
  const auto materials = gen::generate_materials(c.grid, c.master_seed, tmin, c.allow_holes, c.max_attempts);
  io::write_instances(p.instances, materials.instances);
  io::write_file(p.tmin, tmin.to_csv());

  std::ostringstream rep;
  rep << "function_id,N,t_offset,replicate,T,attempts,ok,reason\n";
  std::map<std::tuple<int, int, int, int>, std::string> reasons;
  for (const auto& f : materials.failures) reasons[{f.function_id, f.n_vars, f.t_offset, f.replicate}] = f.failure.reason;
  for (const auto& cell : materials.cells) {
    const auto it = reasons.find({cell.function_id, cell.n_vars, cell.t_offset, cell.replicate});
    rep << cell.function_id << ',' << cell.n_vars << ',' << cell.t_offset << ',' << cell.replicate << ','
        << cell.n_trials << ',' << cell.attempts << ',' << (cell.ok ? 1 : 0) << ','
        << io::csv_field(it == reasons.end() ? "" : it->second) << '\n';
  }
  io::write_file(p.gen_report, rep.str());
  std::cout << "generated " << materials.instances.size() << " instances";
  if (!materials.failures.empty()) std::cout << " (" << materials.failures.size() << " holes)";
  std::cout << " -> " << p.instances.string() << "\n";
  return kExitOk;
}

int cmd_tmin(const RunConfig& c) {
  CommandScope scope(c, "tmin");
  gen::TminTable tmin(c.master_seed, c.max_attempts);
  for (int fid : c.grid.function_ids)
    for (int n : c.grid.n_values) tmin.get(n, logic::function_by_id(fid));
  io::write_file(scope.paths().tmin, tmin.to_csv());
  std::cout << "wrote " << scope.paths().tmin.string() << "\n";
  return kExitOk;
}

int cmd_solve(const RunConfig& c) {
  CommandScope scope(c, "solve");
  const auto& p = scope.paths();
  const auto instances = load_dataset(p);
  const bool run_perm = c.strategy != "elimination";
  const bool run_elim = c.strategy != "permutation";

  std::ostringstream traces, rows, errors;
  errors << "instance_id,error\n";
  rows << "instance_id,strategy,predicted,correct,checks,peak,trials_processed\n";
  struct Mean {
    int n = 0;
    double sum = 0.0;
  };
  std::map<std::tuple<std::string, std::string, int, int>, Mean> checks;
  std::vector<solve::SolveTrace> elim_traces;
  std::vector<std::string> elim_keys;
  std::size_t solved = 0, agree = 0, n_errors = 0;

  for (const auto& inst : instances) {
    const auto problems = gen::validate_instance(inst);
    if (!problems.empty()) {
      std::string msg;
      for (const auto& s : problems) msg += (msg.empty() ? "" : "; ") + s;
      errors << io::csv_field(inst.instance_id) << ',' << io::csv_field(msg) << '\n';
      ++n_errors;
      continue;
    }
    std::vector<solve::SolveTrace> done;
    try {
      if (run_perm) done.push_back(solve::solve(solve::Strategy::Permutation, inst));
      if (run_elim) done.push_back(solve::solve(solve::Strategy::Elimination, inst));
    } catch (const std::exception& e) {
      errors << io::csv_field(inst.instance_id) << ',' << io::csv_field(e.what()) << '\n';
      ++n_errors;
      continue;
    }
    ++solved;
    bool all_agree = true;
    const std::string klass = class_of(inst.function_id);
    for (const auto& t : done) {
      const bool correct = t.predicted_pair == inst.truth_pair;
      all_agree = all_agree && correct;
      traces << io::trace_to_json(inst.instance_id, t, correct).dump() << '\n';
      rows << io::csv_field(inst.instance_id) << ',' << solve::to_string(t.strategy) << ','
           << io::csv_field(io::pair_to_string(t.predicted_pair)) << ',' << (correct ? 1 : 0) << ','
           << t.consistency_checks << ',' << t.peak_working_set << ',' << t.trials_processed << '\n';
      auto& m = checks[{std::string(solve::to_string(t.strategy)), klass, inst.n_vars, inst.n_trials}];
      ++m.n;
      m.sum += static_cast<double>(t.consistency_checks);
      if (t.strategy == solve::Strategy::Elimination) {
        elim_traces.push_back(t);
        elim_keys.push_back(klass + "," + std::to_string(inst.n_vars));
      }
    }
    agree += all_agree;
  }

  fs::create_directories(p.traces);
  io::write_file(p.traces / "traces.jsonl", traces.str());
  io::write_file(p.traces / "traces.csv", rows.str());
  io::write_file(p.traces / "errors.csv", errors.str());

  std::ostringstream summary;
  summary << "strategy,class,N,T,instances,mean_checks\n";
  for (const auto& [k, m] : checks) {
    const auto& [s, klass, n, t] = k;
    summary << s << ',' << klass << ',' << n << ',' << t << ',' << m.n << ',' << num(m.sum / m.n, 3) << '\n';
  }
  io::write_file(p.traces / "summary.csv", summary.str());

  const double rate = solved ? static_cast<double>(agree) / static_cast<double>(solved) : 0.0;
  std::ostringstream agreement;
  agreement << "instances,solved,errors,agreement_rate\n"
            << instances.size() << ',' << solved << ',' << n_errors << ',' << num(rate) << '\n';
  io::write_file(p.traces / "agreement.csv", agreement.str());

  if (!elim_traces.empty()) {
    std::ostringstream pruning;
    pruning << "class,N,instances,mean_area,mean_trials_to_singleton,mean_retention\n";
    for (const auto& [key, s] : solve::pruning_profile(elim_traces, elim_keys))
      pruning << key << ',' << s.traces << ',' << num(s.mean_area) << ',' << num(s.mean_trials_to_singleton, 4) << ','
              << num(s.mean_retention) << '\n';
    io::write_file(p.traces / "pruning.csv", pruning.str());
  }

  std::cout << "solved " << solved << "/" << instances.size() << ", agreement " << num(rate, 4) << ", errors "
            << n_errors << "\n";
  if (n_errors) throw InvalidInstances(std::to_string(n_errors) + " invalid instance(s), see " +
                                       (p.traces / "errors.csv").string());
  return kExitOk;
}

int cmd_export(const RunConfig& c) {
  CommandScope scope(c, "export");
  const auto& p = scope.paths();
  const auto instances = load_dataset(p);
  const auto tmpl = eval::PromptTemplate::standard();
  std::ostringstream out;
  for (const auto& inst : instances) {
    const auto r = eval::render_prompt(inst, c.mode, tmpl);
    nlohmann::ordered_json j;
    j["instance_id"] = r.instance_id;
    j["mode"] = std::string(eval::to_string(r.mode));
    j["template_version"] = r.template_version;
    j["text"] = r.text;
    out << j.dump() << '\n';
  }
  io::write_file(p.prompts, out.str());
  std::cout << "exported " << instances.size() << " prompts -> " << p.prompts.string() << "\n";
  return kExitOk;
}

int cmd_run(const RunConfig& c) {
  CommandScope scope(c, "run");
  const auto& p = scope.paths();
  const auto instances = load_dataset(p);
  const auto prompts = load_prompts(p.prompts);

  std::unique_ptr<eval::MockChatServer> mock;
  eval::EndpointConfig endpoint;
  if (!c.mock.empty()) {
    eval::OracleOptions options;
    if (c.mock == "wrong-xor") options.wrong_on_function = logic::function_by_name("XOR").id;
    mock = std::make_unique<eval::MockChatServer>(eval::oracle_responder(options));
    endpoint = mock->endpoint(c.endpoint ? c.endpoint->model_name : "mock-" + c.mock);
    if (c.endpoint) {
      endpoint.max_in_flight = c.endpoint->max_in_flight;
      endpoint.retry = c.endpoint->retry;
      endpoint.temperature = c.endpoint->temperature;
    }
  } else if (c.endpoint) {
    endpoint = *c.endpoint;
  } else {
    throw ConfigError("run needs --endpoint or --mock");
  }

  std::unordered_map<std::string, const VatInstance*> by_id;
  for (const auto& inst : instances) by_id.emplace(inst.instance_id, &inst);

  const auto transcript = p.transcript_for(endpoint.model_name);
  std::set<std::string> done;
  if (fs::exists(transcript))
    for (const auto& r : eval::latest_records(eval::scan(transcript)))
      if (r.status == eval::RecordStatus::Ok) done.insert(r.instance_id);

  std::vector<eval::PromptRendering> todo;
  std::vector<VatInstance> todo_instances;
  for (const auto& pr : prompts) {
    if (done.count(pr.instance_id)) continue;
    const auto it = by_id.find(pr.instance_id);
    if (it == by_id.end()) throw ConfigError("prompt for unknown instance " + pr.instance_id);
    todo.push_back(pr);
    todo_instances.push_back(*it->second);
  }

  eval::TranscriptLog log(transcript);
  const auto records = eval::run_batch(todo, todo_instances, eval::http_client_factory(endpoint), endpoint, log);
  const auto failed = std::count_if(records.begin(), records.end(),
                                    [](const auto& r) { return r.status == eval::RecordStatus::Failed; });
  std::cout << "ran " << records.size() << " prompts (" << done.size() << " already done), " << failed
            << " failed -> " << transcript.string() << "\n";
  if (failed) throw EndpointFailure(std::to_string(failed) + " request(s) failed after retries");
  return kExitOk;
}

int cmd_judge(const RunConfig& c) {
  CommandScope scope(c, "judge");
  const auto& p = scope.paths();
  std::unique_ptr<eval::MockChatServer> mock;
  eval::EndpointConfig judge;
  if (c.judge_endpoint) {
    judge = *c.judge_endpoint;
  } else if (!c.mock.empty()) {
    mock = std::make_unique<eval::MockChatServer>(eval::keyword_judge_responder());
    judge = mock->endpoint("mock-judge");
  } else {
    throw ConfigError("judge needs --judge-endpoint or --mock");
  }
  if (!fs::exists(p.transcripts)) throw ConfigError("no transcripts in " + p.transcripts.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(p.transcripts))
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::size_t judged = 0, flagged = 0, failed = 0;
  for (const auto& file : files) {
    auto latest = eval::latest_records(eval::scan(file));
    std::vector<eval::EvalRecord> pending;
    for (auto& r : latest)
      if (r.status == eval::RecordStatus::Ok && (!r.judge_label || r.judge_model != judge.model_name))
        pending.push_back(std::move(r));
    eval::TranscriptLog log(file);
    const auto out = eval::judge_batch(pending, eval::http_client_factory(judge), judge, eval::JudgeTemplate::standard(), log);
    for (const auto& r : out) {
      if (r.judge_label) ++judged;
      else ++failed;
      flagged += r.judge_flagged;
    }
  }
  std::cout << "judged " << judged << " records, " << flagged << " flagged, " << failed << " failed\n";
  if (failed) throw EndpointFailure(std::to_string(failed) + " judge request(s) failed");
  return kExitOk;
}

int cmd_report(const RunConfig& c) {
  CommandScope scope(c, "report");
  const auto& p = scope.paths();
  const auto instances = load_dataset(p);
  const auto records = all_latest_records(p);
  if (records.empty()) throw ConfigError("no transcript records in " + p.transcripts.string());
  const bool md = std::find(c.report_formats.begin(), c.report_formats.end(), "md") != c.report_formats.end();
  for (const auto& [name, contents] : build_reports(records, instances)) {
    if (!md && name.ends_with(".md")) continue;
    io::write_file(p.reports / name, contents);
  }
  std::cout << "reported " << records.size() << " records -> " << p.reports.string() << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& c) {
  CommandScope scope(c, "fit");
  const auto& p = scope.paths();
  const auto rows = load_regression_rows(p);
  std::ostringstream errors;
  errors << "model,kind,message\n";
  bool any_failed = false;
  const auto fits = fits_or_errors(rows, c.log_rho, errors, any_failed);
  io::write_file(p.reports / "fit_errors.csv", errors.str());
  auto all = nlohmann::ordered_json::array();
  for (const auto& f : fits) all.push_back(fit_to_json(f));
  io::write_file(p.reports / "fits.json", all.dump(2) + "\n");
  if (!fits.empty()) io::write_file(p.reports / "model_comparison.csv", stats::comparison_csv(stats::compare_models(fits)));
  std::cout << "fitted " << fits.size() << " model(s) on " << rows.size() << " rows\n";
  if (any_failed) throw stats::FitError(stats::FitError::Kind::NonConvergence, "one or more fits failed, see fit_errors.csv");
  return kExitOk;
}

int cmd_landscape(const RunConfig& c) {
  CommandScope scope(c, "landscape");
  const auto& p = scope.paths();
  const auto rows = load_regression_rows(p);
  const auto fit = stats::fit_logistic(rows, stats::ModelSpec::Interaction);
  std::set<int> ns;
  int t_lo = 1 << 30, t_hi = 0;
  for (const auto& r : rows) {
    ns.insert(r.n_vars);
    t_lo = std::min(t_lo, r.n_trials);
    t_hi = std::max(t_hi, r.n_trials);
  }
  for (int n : c.grid.n_values) ns.insert(n);
  std::vector<int> n_values(ns.begin(), ns.end());
  std::vector<int> t_values;
  for (int t = std::max(1, t_lo); t <= t_hi; ++t) t_values.push_back(t);
  const auto land = stats::decision_landscape(fit, n_values, t_values);
  io::write_file(p.reports / "landscape.csv", stats::landscape_csv(land));
  io::write_file(p.reports / "contour.csv", stats::contour_csv(land));
  io::write_file(p.reports / "mean_path.csv", mean_path_csv({rows}));
  std::cout << "landscape " << n_values.size() << "x" << t_values.size() << " -> " << p.reports.string() << "\n";
  return kExitOk;
}

int cmd_costmap(const RunConfig& c) {
  CommandScope scope(c, "costmap");
  const auto& p = scope.paths();
  const auto instances = load_dataset(p);
  std::vector<solve::SolveTrace> traces;
  std::vector<std::string> keys;
  for (const auto& inst : instances) {
    traces.push_back(solve::solve(solve::Strategy::Elimination, inst));
    keys.push_back(class_of(inst.function_id));
  }
  const auto profile = solve::pruning_profile(traces, keys);

  std::ostringstream stats_csv;
  stats_csv << "class,instances,mean_area,mean_retention,hypotheses_per_pair\n";
  for (const auto& [k, s] : profile)
    stats_csv << k << ',' << s.traces << ',' << num(s.mean_area) << ',' << num(s.mean_retention) << ','
              << num(s.hypotheses_per_pair, 3) << '\n';
  io::write_file(p.reports / "pruning_stats.csv", stats_csv.str());

  const int max_offset = *std::max_element(c.grid.t_offsets.begin(), c.grid.t_offsets.end());
  std::ostringstream out;
  out << "class,N,T,permutation_cost,elimination_cost,choice,break_even_c_slot\n";
  for (const auto& [klass, s] : profile) {
    for (int n : c.grid.n_values) {
      const int lo = gen::lower_bound_trials(n);
      for (int t = lo; t <= lo + max_offset; ++t) {
        const auto d = stats::predict_strategy(c.cost, n, t, profile, klass);
        out << klass << ',' << n << ',' << t << ',' << num(d.permutation_cost, 3) << ',' << num(d.elimination_cost, 3)
            << ',' << solve::to_string(d.choice) << ',' << num(stats::break_even_slot_cost(c.cost.c_check, n, t, s), 6)
            << '\n';
      }
    }
  }
  io::write_file(p.reports / "costmap.csv", out.str());
  std::cout << "cost map -> " << (p.reports / "costmap.csv").string() << "\n";
  return kExitOk;
}

int guarded(const std::string& name, const std::function<int()>& command) {
  try {
    return command();
  } catch (const ConfigError& e) {
    std::cerr << name << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gen::MaterialsError& e) {
    std::cerr << name << ": generation failed: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const gen::TminExhausted& e) {
    std::cerr << name << ": generation failed: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const EndpointFailure& e) {
    std::cerr << name << ": endpoint failure: " << e.what() << "\n";
    return kExitEndpoint;
  } catch (const stats::FitError& e) {
    std::cerr << name << ": fit failed: " << e.what() << "\n";
    return kExitFit;
  } catch (const InvalidInstances& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kExitInvalidInstance;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace vat::cli
