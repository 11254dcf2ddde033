#include "vat/solvers.hpp"

#include <cmath>

namespace vat::solve {

namespace {

struct Hypothesis {
  int a;  // bound to argument A
  int b;
  std::uint32_t pair_index;
};

void require_dims(const Design& design, std::span<const std::uint8_t> outputs) {
  if (design.trials() != outputs.size()) throw DimensionError("design and outputs disagree on trial count");
}

}  // namespace

std::string_view to_string(Strategy s) { return s == Strategy::Permutation ? "permutation" : "elimination"; }

SolveTrace solve_permutation(const Design& design, std::span<const std::uint8_t> outputs,
                             const logic::BooleanFunction& f) {
  require_dims(design, outputs);
  const int n = static_cast<int>(design.vars());
  const std::size_t trials = design.trials();

  SolveTrace trace;
  trace.strategy = Strategy::Permutation;
  trace.peak_working_set = 1;
  trace.initial_pairs = gen::pair_count(n);

  int index = 0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q, ++index) {
      const int orders = f.symmetric ? 1 : 2;
      for (int o = 0; o < orders; ++o) {
        const int a = o == 0 ? p : q;
        const int b = o == 0 ? q : p;
        bool ok = true;
        for (std::size_t t = 0; t < trials && ok; ++t) {
          ++trace.consistency_checks;
          ok = f(design.at(t, a), design.at(t, b)) == outputs[t];
        }
        if (ok) {
          trace.predicted_pair = Pair(p, q);
          trace.trials_processed = static_cast<int>(trials);
          trace.resolved_at = index;
          return trace;
        }
      }
    }
  }
  throw NoSolution("no candidate pair reproduces the outputs");
}

SolveTrace solve_elimination(const Design& design, std::span<const std::uint8_t> outputs,
                             const logic::BooleanFunction& f) {
  require_dims(design, outputs);
  const int n = static_cast<int>(design.vars());
  const std::size_t trials = design.trials();

  std::vector<Hypothesis> alive;
  std::uint32_t idx = 0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q, ++idx) {
      alive.push_back({p, q, idx});
      if (!f.symmetric) alive.push_back({q, p, idx});
    }
  }

  SolveTrace trace;
  trace.strategy = Strategy::Elimination;
  trace.peak_working_set = alive.size();
  trace.initial_pairs = gen::pair_count(n);

  auto distinct_pairs = [&] {
    std::uint64_t count = 0;
    std::uint32_t last = UINT32_MAX;
    for (const auto& h : alive) {
      if (h.pair_index != last) ++count;
      last = h.pair_index;
    }
    return count;
  };

  std::uint64_t pairs_alive = trace.initial_pairs;
  for (std::size_t t = 0; t < trials && pairs_alive > 1; ++t) {
    std::erase_if(alive, [&](const Hypothesis& h) {
      ++trace.consistency_checks;
      return f(design.at(t, h.a), design.at(t, h.b)) != outputs[t];
    });
    pairs_alive = distinct_pairs();
    trace.surviving_counts.push_back(pairs_alive);
    trace.trials_processed = static_cast<int>(t) + 1;
    if (pairs_alive == 0) throw NoSolution("hypothesis set emptied at trial " + std::to_string(t));
  }

  if (pairs_alive != 1)
    throw Ambiguous(std::to_string(pairs_alive) + " pairs survive all " + std::to_string(trials) + " trials", pairs_alive);

  const auto& h = alive.front();
  trace.predicted_pair = Pair(h.a, h.b);
  trace.resolved_at = trace.trials_processed - 1;
  return trace;
}

SolveTrace solve(Strategy s, const VatInstance& inst) {
  return s == Strategy::Permutation ? solve_permutation(inst.design, inst.outputs, inst.function())
                                    : solve_elimination(inst.design, inst.outputs, inst.function());
}

double normalized_area(const SolveTrace& trace) {
  if (trace.surviving_counts.empty() || trace.initial_pairs == 0) return 0.0;
  double sum = 0.0;
  for (auto c : trace.surviving_counts) sum += static_cast<double>(c);
  return sum / (static_cast<double>(trace.surviving_counts.size()) * static_cast<double>(trace.initial_pairs));
}

std::map<std::string, PruningSummary> pruning_profile(std::span<const SolveTrace> traces,
                                                      std::span<const std::string> group_keys) {
  if (traces.empty()) throw std::invalid_argument("pruning_profile: no traces");
  if (traces.size() != group_keys.size()) throw std::invalid_argument("pruning_profile: one group key per trace");

  struct Acc {
    std::size_t n = 0;
    double trials = 0, area = 0, log_keep = 0, hyp_ratio = 0;
    std::size_t steps = 0;
  };
  std::map<std::string, Acc> acc;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& tr = traces[i];
    if (tr.strategy != Strategy::Elimination) throw std::invalid_argument("pruning_profile: expects elimination traces");
    auto& a = acc[group_keys[i]];
    ++a.n;
    a.trials += tr.trials_processed;
    a.area += normalized_area(tr);
    a.hyp_ratio += tr.initial_pairs ? static_cast<double>(tr.peak_working_set) / static_cast<double>(tr.initial_pairs) : 1.0;
    double before = static_cast<double>(tr.initial_pairs);
    for (auto c : tr.surviving_counts) {
      a.log_keep += std::log(static_cast<double>(c) / before);
      before = static_cast<double>(c);
      ++a.steps;
    }
  }

  std::map<std::string, PruningSummary> out;
  for (const auto& [key, a] : acc) {
    PruningSummary s;
    s.traces = a.n;
    s.mean_trials_to_singleton = a.trials / static_cast<double>(a.n);
    s.mean_area = a.area / static_cast<double>(a.n);
    s.mean_retention = a.steps ? std::exp(a.log_keep / static_cast<double>(a.steps)) : 1.0;
    s.hypotheses_per_pair = a.hyp_ratio / static_cast<double>(a.n);
    out.emplace(key, s);
  }
  return out;
}

}  // namespace vat::solve
