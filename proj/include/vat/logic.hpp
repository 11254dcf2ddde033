#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vat::logic {

/// Class of a non-trivial bivariate function, by number of positive rows.
enum class FunctionClass { Conjunctive, Disjunctive, XorLike };

std::string_view to_string(FunctionClass c);

/// Outputs indexed by row (0,0),(0,1),(1,0),(1,1).
using TruthTable = std::array<std::uint8_t, 4>;

/// One of the 16 bivariate Boolean functions f(A, B).
///
/// The id is the truth table read as a 4-bit number, most significant bit
/// first in canonical row order, so id 6 is 0110 (XOR) and id 2 is 0010
/// (A AND NOT B).
struct BooleanFunction {
  std::uint8_t id = 0;
  std::string name;   // canonical, e.g. "A AND NOT B"
  std::string key;    // identifier-safe alias, e.g. "A_AND_NOT_B"
  TruthTable table{};
  std::optional<FunctionClass> klass;  // set only for non-trivial functions
  bool symmetric = false;

  std::uint8_t operator()(std::uint8_t a, std::uint8_t b) const {
    return table[2 * (a & 1) + (b & 1)];
  }
  int positive_rows() const { return table[0] + table[1] + table[2] + table[3]; }

  friend bool operator==(const BooleanFunction& x, const BooleanFunction& y) {
    return x.id == y.id;
  }
};

/// All 16 functions, ordered by id.
const std::vector<BooleanFunction>& enumerate_all();

/// The 10 functions that depend on both arguments, ordered by id.
const std::vector<BooleanFunction>& nontrivial_functions();

const BooleanFunction& function_by_id(int id);

/// Accepts the canonical name, the key alias, short aliases such as "XOR",
/// or a decimal id. Case-insensitive. Throws std::invalid_argument.
const BooleanFunction& function_by_name(std::string_view name);

bool is_nontrivial(const BooleanFunction& f);

std::uint8_t evaluate(const BooleanFunction& f, std::uint8_t a, std::uint8_t b);

/// Builds a function record from a bare table (used by exhaustive checks).
BooleanFunction from_table(const TruthTable& table);

}  // namespace vat::logic
