#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "vat/instance.hpp"
#include "vat/io.hpp"
#include "vat/logic.hpp"

using namespace vat;

namespace {

Design from_columns(const std::vector<Bits>& cols) {
  Design d(cols.front().size(), cols.size());
  for (std::size_t v = 0; v < cols.size(); ++v)
    for (std::size_t t = 0; t < cols[v].size(); ++t) d.set(t, v, cols[v][t]);
  return d;
}

// Brute force over every ordered pair (p, q), p != q.
std::set<std::pair<int, int>> oracle_pairs(const Design& d, const Bits& y, const logic::BooleanFunction& f) {
  std::set<std::pair<int, int>> out;
  const int n = static_cast<int>(d.vars());
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      bool ok = true;
      for (std::size_t t = 0; t < d.trials() && ok; ++t) ok = f(d.at(t, p), d.at(t, q)) == y[t];
      if (ok) out.insert({std::min(p, q), std::max(p, q)});
    }
  }
  return out;
}

std::set<std::pair<int, int>> as_set(const std::vector<Pair>& pairs) {
  std::set<std::pair<int, int>> out;
  for (const auto& p : pairs) out.insert({p.first, p.second});
  return out;
}

VatInstance ok(const gen::GenerationResult& r) {
  if (!std::holds_alternative<VatInstance>(r)) throw std::runtime_error(std::get<gen::GenerationFailed>(r).reason);
  return std::get<VatInstance>(r);
}

// Smallest T at which some N=3 design satisfying the column constraints
// identifies a unique pair under f, by enumerating every design.
int exhaustive_min_trials_n3(const logic::BooleanFunction& f, int t_max) {
  for (int T = 1; T <= t_max; ++T) {
    const int cells = 3 * T;
    for (std::uint32_t bits = 0; bits < (1u << cells); ++bits) {
      Design d(T, 3);
      for (int i = 0; i < cells; ++i) d.set(i / 3, i % 3, (bits >> i) & 1);
      bool constant = false;
      int ones[3] = {0, 0, 0};
      for (int v = 0; v < 3; ++v) {
        for (int t = 0; t < T; ++t) ones[v] += d.at(t, v);
        constant = constant || ones[v] == 0 || ones[v] == T;
      }
      if (constant) continue;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          const int decoy = 3 - i - j;
          if (std::abs(ones[decoy] - ones[i]) > 1 && std::abs(ones[decoy] - ones[j]) > 1) continue;
          Bits y(T);
          for (int t = 0; t < T; ++t) y[t] = f(d.at(t, i), d.at(t, j));
          if (oracle_pairs(d, y, f).size() == 1) return T;
        }
      }
    }
  }
  return -1;
}

}  // namespace

TEST(ConsistentPairs, HandExample) {
  const auto d = from_columns({{1, 1, 0}, {1, 0, 1}, {1, 1, 1}});
  const auto& f = logic::function_by_name("AND");
  EXPECT_EQ(gen::check_consistent_pairs(d, Bits{1, 0, 0}, f), (std::vector<Pair>{{0, 1}}));
  EXPECT_TRUE(gen::check_consistent_pairs(d, Bits{1, 1, 1}, f).empty());
}

TEST(ConsistentPairs, NoTrialsMeansEveryPair) {
  Design d(0, 5);
  EXPECT_EQ(gen::check_consistent_pairs(d, Bits{}, logic::function_by_name("XOR")).size(), 10u);
}

TEST(ConsistentPairs, DimensionMismatch) {
  Design d(3, 4);
  EXPECT_THROW(gen::check_consistent_pairs(d, Bits{0, 1}, logic::function_by_name("AND")), DimensionError);
}

TEST(ConsistentPairs, MatchesBruteForceOnRandomDesigns) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const int T = 1 + static_cast<int>(rng() % 6);
    Design d(T, n);
    for (int t = 0; t < T; ++t)
      for (int v = 0; v < n; ++v) d.set(t, v, rng() & 1);
    Bits y(T);
    for (auto& b : y) b = rng() & 1;
    for (const auto& f : logic::nontrivial_functions())
      ASSERT_EQ(as_set(gen::check_consistent_pairs(d, y, f)), oracle_pairs(d, y, f)) << f.name;
  }
}

TEST(LowerBound, Values) {
  EXPECT_EQ(gen::lower_bound_trials(3), 2);
  EXPECT_EQ(gen::lower_bound_trials(4), 3);
  EXPECT_EQ(gen::lower_bound_trials(16), 7);
  for (int n = 3; n <= 40; ++n) {
    const double m = n * (n - 1) / 2.0;
    EXPECT_EQ(gen::lower_bound_trials(n), static_cast<int>(std::ceil(std::log2(m)))) << n;
  }
  EXPECT_THROW(gen::lower_bound_trials(2), std::invalid_argument);
}

TEST(Generate, SmallAndInstanceIsUnique) {
  const auto& inst = ok(gen::generate_instance(3, 2, logic::function_by_name("AND"), 12345));
  EXPECT_EQ(oracle_pairs(inst.design, inst.outputs, inst.function()).size(), 1u);
  EXPECT_TRUE(gen::validate_instance(inst).empty());
}

TEST(Generate, PigeonholeFailure) {
  const auto r = gen::generate_instance(3, 1, logic::function_by_name("XOR"), 99);
  ASSERT_TRUE(std::holds_alternative<gen::GenerationFailed>(r));
}

TEST(Generate, LargeOrInstanceAtLowerBound) {
  const auto r = gen::generate_instance(16, 7, logic::function_by_name("OR"), 31337);
  if (std::holds_alternative<VatInstance>(r)) {
    const auto& inst = std::get<VatInstance>(r);
    EXPECT_TRUE(gen::validate_instance(inst).empty());
    EXPECT_DOUBLE_EQ(std::ldexp(1.0, inst.n_trials) / 120.0, 128.0 / 120.0);
  } else {
    EXPECT_GT(std::get<gen::GenerationFailed>(r).attempts, 0);
  }
}

TEST(Generate, InvariantsHoldAcrossSeeds) {
  for (const auto& f : logic::nontrivial_functions()) {
    for (int n : {3, 5, 8, 12}) {
      for (int extra = 0; extra < 3; ++extra) {
        const int T = gen::lower_bound_trials(n) + extra;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          const auto r = gen::generate_instance(n, T, f, seed * 7919 + n);
          if (!std::holds_alternative<VatInstance>(r)) continue;
          const auto& inst = std::get<VatInstance>(r);
          ASSERT_TRUE(gen::validate_instance(inst).empty()) << inst.instance_id;
          const auto pairs = oracle_pairs(inst.design, inst.outputs, f);
          ASSERT_EQ(pairs, (std::set<std::pair<int, int>>{{inst.truth_pair.first, inst.truth_pair.second}}));
          for (int t = 0; t < T; ++t)
            ASSERT_EQ(inst.outputs[t], f(inst.design.at(t, inst.var_a()), inst.design.at(t, inst.var_b())));
          for (int v = 0; v < n; ++v) {
            const int ones = inst.design.ones_in_column(v);
            ASSERT_GT(ones, 0);
            ASSERT_LT(ones, T);
          }
        }
      }
    }
  }
}

TEST(Generate, Deterministic) {
  const auto& f = logic::function_by_name("A OR NOT B");
  const auto a = gen::generate_instance(10, 7, f, 2024);
  const auto b = gen::generate_instance(10, 7, f, 2024);
  ASSERT_TRUE(std::holds_alternative<VatInstance>(a));
  EXPECT_EQ(std::get<VatInstance>(a), std::get<VatInstance>(b));
  EXPECT_EQ(io::instance_to_json(std::get<VatInstance>(a)).dump(), io::instance_to_json(std::get<VatInstance>(b)).dump());
  const auto c = gen::generate_instance(10, 7, f, 2025);
  ASSERT_TRUE(std::holds_alternative<VatInstance>(c));
  EXPECT_NE(std::get<VatInstance>(a).design, std::get<VatInstance>(c).design);
}

TEST(Generate, AppendingRowsKeepsUniqueness) {
  std::mt19937_64 rng(11);
  for (const auto& f : logic::nontrivial_functions()) {
    auto inst = ok(gen::generate_instance(8, 5, f, 500 + f.id));
    for (int extra = 0; extra < 6; ++extra) {
      Bits row(8);
      for (auto& b : row) b = rng() & 1;
      inst.design.append_row(row);
      inst.outputs.push_back(f(row[inst.var_a()], row[inst.var_b()]));
      const auto pairs = gen::check_consistent_pairs(inst.design, inst.outputs, f);
      ASSERT_EQ(pairs, (std::vector<Pair>{inst.truth_pair}));
    }
  }
}

TEST(Generate, ValidateCatchesCorruption) {
  auto inst = ok(gen::generate_instance(6, 5, logic::function_by_name("XOR"), 3));
  auto bad = inst;
  bad.outputs[0] ^= 1;
  EXPECT_FALSE(gen::validate_instance(bad).empty());
  bad = inst;
  for (int t = 0; t < bad.n_trials; ++t) bad.design.set(t, 0, 1);
  EXPECT_FALSE(gen::validate_instance(bad).empty());
}

TEST(Tmin, AtLeastLowerBoundAndExhaustiveAtN3) {
  for (const auto& f : logic::nontrivial_functions()) {
    for (int n : {3, 4, 6, 10, 16}) {
      const auto e = gen::t_min(n, f, 77);
      EXPECT_GE(e.t_min, gen::lower_bound_trials(n));
      EXPECT_LE(e.t_min, gen::lower_bound_trials(n) + gen::kTminSearchSlack);
    }
  }
  for (const char* name : {"AND", "XOR"}) {
    const auto& f = logic::function_by_name(name);
    const int truth = exhaustive_min_trials_n3(f, 4);
    EXPECT_EQ(truth, 2) << name;
    EXPECT_EQ(gen::t_min(3, f, 77).t_min, truth) << name;
  }
}

TEST(Tmin, XorAtTen) {
  const auto e = gen::t_min(10, logic::function_by_name("XOR"), 1);
  EXPECT_GE(e.t_min, 6);
  EXPECT_LE(e.t_min, 14);
}

TEST(Tmin, TableCsvRoundTrip) {
  gen::TminTable table(5);
  table.get(3, logic::function_by_name("AND"));
  table.get(8, logic::function_by_name("XNOR"));
  const auto csv = table.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "function_id,N,t_min,attempts");
  const auto parsed = gen::TminTable::parse_csv(csv);
  ASSERT_EQ(parsed.size(), 2u);
  const auto entries = table.entries();
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].function_id, entries[i].function_id);
    EXPECT_EQ(parsed[i].n_vars, entries[i].n_vars);
    EXPECT_EQ(parsed[i].t_min, entries[i].t_min);
    EXPECT_EQ(parsed[i].attempts, entries[i].attempts);
  }
  const auto per_n = table.per_n_maximum();
  EXPECT_EQ(per_n.at(3), table.get(3, logic::function_by_name("AND")).t_min);
}

TEST(Materials, DefaultGridCoverage) {
  gen::MaterialsGrid grid;
  EXPECT_EQ(grid.size(), 3000u);
  gen::TminTable tmin(42);
  const auto m = gen::generate_materials(grid, 42, tmin);
  ASSERT_EQ(m.instances.size(), 3000u);
  std::map<int, int> per_function;
  std::set<std::string> ids;
  for (const auto& inst : m.instances) {
    ++per_function[inst.function_id];
    ids.insert(inst.instance_id);
  }
  EXPECT_EQ(ids.size(), 3000u);
  for (int fid : grid.function_ids) EXPECT_EQ(per_function[fid], 300);
  for (int fid : grid.function_ids)
    for (int n : grid.n_values)
      for (int o : grid.t_offsets)
        for (int r = 0; r < grid.samples_per_cell; ++r) EXPECT_EQ(ids.count(gen::instance_id_for(fid, n, o, r)), 1u);
}

TEST(Materials, SameSeedSameBytes) {
  gen::MaterialsGrid grid;
  grid.n_values = {3, 6, 10};
  gen::TminTable t1(9), t2(9);
  const auto a = gen::generate_materials(grid, 9, t1);
  const auto b = gen::generate_materials(grid, 9, t2);
  EXPECT_EQ(io::instances_to_jsonl(a.instances), io::instances_to_jsonl(b.instances));
  EXPECT_EQ(t1.to_csv(), t2.to_csv());
}

TEST(Materials, FailingCellSurfacesOrBecomesHole) {
  gen::MaterialsGrid grid;
  grid.n_values = {3};
  grid.t_offsets = {0};
  grid.samples_per_cell = 1;
  grid.function_ids = {1, 6};
  gen::TminTable tmin(1);
  tmin.insert({6, 3, 1, 0});  // forces T = 1, which cannot separate 3 pairs
  try {
    gen::generate_materials(grid, 1, tmin);
    FAIL() << "expected MaterialsError";
  } catch (const gen::MaterialsError& e) {
    EXPECT_EQ(e.cell().function_id, 6);
    EXPECT_EQ(e.cell().n_trials, 1);
  }
  const auto m = gen::generate_materials(grid, 1, tmin, true);
  EXPECT_EQ(m.instances.size(), 1u);
  ASSERT_EQ(m.failures.size(), 1u);
  EXPECT_EQ(m.failures[0].function_id, 6);
}

TEST(Materials, InvalidGrid) {
  gen::MaterialsGrid grid;
  grid.n_values = {2};
  EXPECT_THROW(grid.validate(), std::invalid_argument);
  grid = {};
  grid.function_ids = {0};
  EXPECT_THROW(grid.validate(), std::invalid_argument);
}

TEST(InstanceJson, RoundTrip) {
  const auto& inst = ok(gen::generate_instance(7, 6, logic::function_by_name("A AND NOT B"), 4));
  const auto j = io::instance_to_json(inst);
  EXPECT_EQ(j["function_name"], "A AND NOT B");
  EXPECT_EQ(j["design"].size(), 6u);
  EXPECT_EQ(j["design"][0].get<std::string>().size(), 7u);
  EXPECT_EQ(io::instance_from_json(j), inst);
  const auto many = io::instances_to_jsonl(std::vector<VatInstance>{inst, inst});
  EXPECT_EQ(io::instances_from_jsonl(many).size(), 2u);
  auto broken = j;
  broken["outputs"] = "01";
  EXPECT_THROW(io::instance_from_json(broken), std::invalid_argument);
}
