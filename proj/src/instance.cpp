#include "vat/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "vat/random.hpp"

namespace vat {

Bits Design::column(std::size_t var) const {
  Bits out(trials_);
  for (std::size_t t = 0; t < trials_; ++t) out[t] = at(t, var);
  return out;
}

int Design::ones_in_column(std::size_t var) const {
  int ones = 0;
  for (std::size_t t = 0; t < trials_; ++t) ones += at(t, var);
  return ones;
}

Design Design::prefix(std::size_t trials) const {
  trials = std::min(trials, trials_);
  Design out(trials, vars_);
  std::copy_n(bits_.begin(), trials * vars_, out.bits_.begin());
  return out;
}

void Design::append_row(std::span<const std::uint8_t> row) {
  if (trials_ == 0 && vars_ == 0) vars_ = row.size();
  if (row.size() != vars_) throw DimensionError("row width does not match design");
  for (auto b : row) bits_.push_back(b & 1);
  ++trials_;
}

}  // namespace vat

namespace vat::gen {

namespace {

bool reproduces(const Design& d, std::span<const std::uint8_t> y, const logic::BooleanFunction& f, int a, int b) {
  for (std::size_t t = 0; t < d.trials(); ++t) {
    if (f(d.at(t, a), d.at(t, b)) != y[t]) return false;
  }
  return true;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// Uniform over all length-T columns whose ones-count lies in `counts`.
Bits sample_column(Rng& rng, int trials, const std::vector<int>& counts) {
  std::uint64_t total = 0;
  for (int k : counts) total += binomial(trials, k);
  std::uint64_t pick = uniform_below(rng, total);
  int ones = counts.back();
  for (int k : counts) {
    const auto w = binomial(trials, k);
    if (pick < w) {
      ones = k;
      break;
    }
    pick -= w;
  }
  std::vector<int> idx(static_cast<std::size_t>(trials));
  std::iota(idx.begin(), idx.end(), 0);
  Bits col(static_cast<std::size_t>(trials), 0);
  for (int i = 0; i < ones; ++i) {
    const auto j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(trials - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    col[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
  }
  return col;
}

Pair pair_at(int n_vars, std::uint64_t index) {
  for (int i = 0; i < n_vars; ++i) {
    const auto row = static_cast<std::uint64_t>(n_vars - 1 - i);
    if (index < row) return {i, i + 1 + static_cast<int>(index)};
    index -= row;
  }
  throw std::logic_error("pair index out of range");
}

bool balanced(int ones, int ones_i, int ones_j) {
  return std::abs(ones - ones_i) <= 1 || std::abs(ones - ones_j) <= 1;
}

}  // namespace

std::vector<Pair> check_consistent_pairs(const Design& design, std::span<const std::uint8_t> outputs,
                                         const logic::BooleanFunction& f) {
  if (design.trials() != outputs.size())
    throw DimensionError("design has " + std::to_string(design.trials()) + " trials but outputs has " +
                         std::to_string(outputs.size()));
  const int n = static_cast<int>(design.vars());
  std::vector<Pair> found;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      if (reproduces(design, outputs, f, p, q) || (!f.symmetric && reproduces(design, outputs, f, q, p)))
        found.emplace_back(p, q);
    }
  }
  return found;
}

std::uint64_t pair_count(int n_vars) {
  return n_vars < 2 ? 0 : static_cast<std::uint64_t>(n_vars) * static_cast<std::uint64_t>(n_vars - 1) / 2;
}

int lower_bound_trials(int n_vars) {
  if (n_vars < 3) throw std::invalid_argument("lower_bound_trials requires N >= 3");
  const auto pairs = pair_count(n_vars);
  int t = 0;
  while ((std::uint64_t{1} << t) < pairs) ++t;
  return t;
}

GenerationResult generate_instance(int n_vars, int n_trials, const logic::BooleanFunction& f, std::uint64_t seed,
                                   int max_attempts) {
  return generate_counted(n_vars, n_trials, f, seed, max_attempts).result;
}

CountedGeneration generate_counted(int n_vars, int n_trials, const logic::BooleanFunction& f, std::uint64_t seed,
                                   int max_attempts) {
  if (n_vars < 3) throw std::invalid_argument("generate_instance requires N >= 3");
  if (n_trials < 1 || n_trials > 62) throw std::invalid_argument("generate_instance requires 1 <= T <= 62");
  if (!logic::is_nontrivial(f)) throw std::invalid_argument("generate_instance requires a non-trivial function");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");

  if (n_trials < 2) return {GenerationFailed{0, "T < 2 leaves no non-constant column"}, 0};

  Rng rng(seed);
  std::vector<int> any_mixed(static_cast<std::size_t>(n_trials - 1));
  std::iota(any_mixed.begin(), any_mixed.end(), 1);

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    const Pair truth = pair_at(n_vars, uniform_below(rng, pair_count(n_vars)));
    const auto order = uniform_below(rng, 2) == 0 ? RoleOrder::FirstIsA : RoleOrder::SecondIsA;

    const Bits col_i = sample_column(rng, n_trials, any_mixed);
    const Bits col_j = sample_column(rng, n_trials, any_mixed);
    const int ones_i = static_cast<int>(std::count(col_i.begin(), col_i.end(), 1));
    const int ones_j = static_cast<int>(std::count(col_j.begin(), col_j.end(), 1));

    std::vector<int> decoy_counts;
    for (int k = 1; k < n_trials; ++k)
      if (balanced(k, ones_i, ones_j)) decoy_counts.push_back(k);

    Design design(static_cast<std::size_t>(n_trials), static_cast<std::size_t>(n_vars));
    for (int v = 0; v < n_vars; ++v) {
      const Bits col = v == truth.first ? col_i : v == truth.second ? col_j : sample_column(rng, n_trials, decoy_counts);
      for (int t = 0; t < n_trials; ++t) design.set(static_cast<std::size_t>(t), static_cast<std::size_t>(v), col[static_cast<std::size_t>(t)]);
    }

    VatInstance inst;
    inst.n_vars = n_vars;
    inst.n_trials = n_trials;
    inst.function_id = f.id;
    inst.truth_pair = truth;
    inst.role_order = order;
    inst.seed = seed;
    inst.outputs.resize(static_cast<std::size_t>(n_trials));
    for (int t = 0; t < n_trials; ++t) {
      const auto st = static_cast<std::size_t>(t);
      inst.outputs[st] = f(design.at(st, static_cast<std::size_t>(inst.var_a())),
                           design.at(st, static_cast<std::size_t>(inst.var_b())));
    }
    inst.design = std::move(design);

    const auto consistent = check_consistent_pairs(inst.design, inst.outputs, f);
    if (consistent.size() == 1 && consistent.front() == truth) return {std::move(inst), attempt};
  }
  return {GenerationFailed{max_attempts, "no uniquely identifying design within attempt budget"}, max_attempts};
}

std::vector<std::string> validate_instance(const VatInstance& inst) {
  std::vector<std::string> problems;
  const auto& d = inst.design;
  if (inst.n_vars < 3) problems.emplace_back("n_vars < 3");
  if (static_cast<int>(d.vars()) != inst.n_vars || static_cast<int>(d.trials()) != inst.n_trials ||
      static_cast<int>(inst.outputs.size()) != inst.n_trials) {
    problems.emplace_back("dimension mismatch");
    return problems;
  }
  if (inst.truth_pair.first < 0 || inst.truth_pair.second >= inst.n_vars || inst.truth_pair.first == inst.truth_pair.second) {
    problems.emplace_back("truth pair out of range");
    return problems;
  }
  if (inst.function_id < 0 || inst.function_id > 15) {
    problems.emplace_back("function id out of range");
    return problems;
  }
  const auto& f = inst.function();
  if (!logic::is_nontrivial(f)) problems.emplace_back("function is trivial");

  for (int t = 0; t < inst.n_trials; ++t) {
    const auto st = static_cast<std::size_t>(t);
    if (f(d.at(st, static_cast<std::size_t>(inst.var_a())), d.at(st, static_cast<std::size_t>(inst.var_b()))) != inst.outputs[st]) {
      problems.push_back("output mismatch at trial " + std::to_string(t));
      break;
    }
  }
  const auto consistent = check_consistent_pairs(d, inst.outputs, f);
  if (consistent.size() != 1 || consistent.front() != inst.truth_pair)
    problems.push_back("uniqueness violated: " + std::to_string(consistent.size()) + " consistent pairs");

  const int ones_i = d.ones_in_column(static_cast<std::size_t>(inst.truth_pair.first));
  const int ones_j = d.ones_in_column(static_cast<std::size_t>(inst.truth_pair.second));
  for (int v = 0; v < inst.n_vars; ++v) {
    const int ones = d.ones_in_column(static_cast<std::size_t>(v));
    if (ones == 0 || ones == inst.n_trials) problems.push_back("constant column V" + std::to_string(v));
    else if (!balanced(ones, ones_i, ones_j)) problems.push_back("unbalanced column V" + std::to_string(v));
  }
  return problems;
}

TminEntry t_min(int n_vars, const logic::BooleanFunction& f, std::uint64_t seed, int attempts_per_t) {
  const int lower = lower_bound_trials(n_vars);
  for (int t = lower; t <= lower + kTminSearchSlack; ++t) {
    const auto seed_t = hash_seed(seed, {0x746d696eULL, static_cast<std::uint64_t>(n_vars), f.id, static_cast<std::uint64_t>(t)});
    const auto run = generate_counted(n_vars, t, f, seed_t, attempts_per_t);
    if (std::holds_alternative<VatInstance>(run.result)) return {f.id, n_vars, t, run.attempts};
  }
  throw TminExhausted("no T in [" + std::to_string(lower) + ", " + std::to_string(lower + kTminSearchSlack) +
                      "] admits a generated instance for N=" + std::to_string(n_vars) + ", f=" + f.name);
}

}  // namespace vat::gen
