#include <gtest/gtest.h>

#include <map>
#include <set>

#include "vat/logic.hpp"

using namespace vat::logic;

namespace {

// Independent classification straight from a truth table.
bool depends_on_a(const TruthTable& t) { return t[0] != t[2] || t[1] != t[3]; }
bool depends_on_b(const TruthTable& t) { return t[0] != t[1] || t[2] != t[3]; }

}  // namespace

TEST(Logic, SixteenFunctions) {
  const auto& all = enumerate_all();
  ASSERT_EQ(all.size(), 16u);
  std::set<TruthTable> tables;
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].id, i);
    tables.insert(all[i].table);
  }
  EXPECT_EQ(tables.size(), 16u);
}

TEST(Logic, IdIsTableReadMsbFirst) {
  for (const auto& f : enumerate_all()) {
    const int bits = f.table[0] << 3 | f.table[1] << 2 | f.table[2] << 1 | f.table[3];
    EXPECT_EQ(bits, f.id) << f.name;
  }
}

TEST(Logic, NamedFunctions) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      EXPECT_EQ(function_by_name("AND")(a, b), a & b);
      EXPECT_EQ(function_by_name("OR")(a, b), a | b);
      EXPECT_EQ(function_by_name("XOR")(a, b), a ^ b);
      EXPECT_EQ(function_by_name("XNOR")(a, b), !(a ^ b));
      EXPECT_EQ(function_by_name("NAND")(a, b), !(a & b));
      EXPECT_EQ(function_by_name("NOR")(a, b), !(a | b));
      EXPECT_EQ(function_by_name("A AND NOT B")(a, b), a & !b);
      EXPECT_EQ(function_by_name("A OR NOT B")(a, b), a | !b);
    }
  }
}

TEST(Logic, NontrivialClassesByExhaustiveEnumeration) {
  std::vector<TruthTable> expected;
  for (int bits = 0; bits < 16; ++bits) {
    TruthTable t{static_cast<std::uint8_t>(bits >> 3 & 1), static_cast<std::uint8_t>(bits >> 2 & 1),
                 static_cast<std::uint8_t>(bits >> 1 & 1), static_cast<std::uint8_t>(bits & 1)};
    if (depends_on_a(t) && depends_on_b(t)) expected.push_back(t);
  }
  const auto& nt = nontrivial_functions();
  ASSERT_EQ(nt.size(), expected.size());
  ASSERT_EQ(nt.size(), 10u);

  std::map<FunctionClass, std::set<std::string>> classes;
  for (std::size_t i = 0; i < nt.size(); ++i) {
    EXPECT_EQ(nt[i].table, expected[i]);
    ASSERT_TRUE(nt[i].klass.has_value());
    const int pos = nt[i].positive_rows();
    const auto want = pos == 1 ? FunctionClass::Conjunctive : pos == 3 ? FunctionClass::Disjunctive : FunctionClass::XorLike;
    EXPECT_EQ(*nt[i].klass, want) << nt[i].name;
    classes[*nt[i].klass].insert(nt[i].key);
  }
  EXPECT_EQ(classes[FunctionClass::Conjunctive].size(), 4u);
  EXPECT_EQ(classes[FunctionClass::Disjunctive].size(), 4u);
  EXPECT_EQ(classes[FunctionClass::XorLike], (std::set<std::string>{"XOR", "XNOR"}));
}

TEST(Logic, TrivialFunctionsHaveNoClass) {
  for (const auto& f : enumerate_all()) {
    EXPECT_EQ(is_nontrivial(f), f.klass.has_value());
    EXPECT_EQ(is_nontrivial(f), depends_on_a(f.table) && depends_on_b(f.table));
  }
}

TEST(Logic, Symmetry) {
  for (const auto& f : enumerate_all()) {
    EXPECT_EQ(f.symmetric, f.table[1] == f.table[2]) << f.name;
  }
  EXPECT_TRUE(function_by_name("XOR").symmetric);
  EXPECT_FALSE(function_by_name("A AND NOT B").symmetric);
}

TEST(Logic, LookupAliases) {
  EXPECT_EQ(function_by_name("xor").id, 6);
  EXPECT_EQ(function_by_name("A XOR B").id, 6);
  EXPECT_EQ(function_by_name("6").id, 6);
  EXPECT_EQ(function_by_name("a_and_not_b").id, 2);
  EXPECT_THROW(function_by_name("MAYBE"), std::invalid_argument);
  EXPECT_THROW(function_by_id(16), std::invalid_argument);
  EXPECT_THROW(function_by_id(-1), std::invalid_argument);
}

TEST(Logic, EvaluateMatchesCallAndFromTable) {
  for (const auto& f : enumerate_all()) {
    for (std::uint8_t a = 0; a < 2; ++a)
      for (std::uint8_t b = 0; b < 2; ++b) EXPECT_EQ(evaluate(f, a, b), f(a, b));
    EXPECT_EQ(from_table(f.table).id, f.id);
  }
}

TEST(Logic, ClassNames) {
  EXPECT_EQ(to_string(FunctionClass::Conjunctive), "conjunctive");
  EXPECT_EQ(to_string(FunctionClass::Disjunctive), "disjunctive");
  EXPECT_EQ(to_string(FunctionClass::XorLike), "xor_like");
}
