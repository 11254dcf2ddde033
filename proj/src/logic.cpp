#include "vat/logic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace vat::logic {

namespace {

struct Names {
  const char* name;
  const char* key;
};

// Indexed by id.
constexpr std::array<Names, 16> kNames = {{
    {"FALSE", "FALSE"},
    {"A AND B", "AND"},
    {"A AND NOT B", "A_AND_NOT_B"},
    {"A", "A"},
    {"NOT A AND B", "NOT_A_AND_B"},
    {"B", "B"},
    {"A XOR B", "XOR"},
    {"A OR B", "OR"},
    {"A NOR B", "NOR"},
    {"A XNOR B", "XNOR"},
    {"NOT B", "NOT_B"},
    {"A OR NOT B", "A_OR_NOT_B"},
    {"NOT A", "NOT_A"},
    {"NOT A OR B", "NOT_A_OR_B"},
    {"A NAND B", "NAND"},
    {"TRUE", "TRUE"},
}};

TruthTable decode(int id) {
  TruthTable t{};
  for (int row = 0; row < 4; ++row) t[row] = static_cast<std::uint8_t>((id >> (3 - row)) & 1);
  return t;
}

int encode(const TruthTable& t) {
  int id = 0;
  for (int row = 0; row < 4; ++row) id = (id << 1) | (t[row] & 1);
  return id;
}

bool depends_on_both(const TruthTable& t) {
  // t[2a+b]
  const bool depends_on_a = t[0] != t[2] || t[1] != t[3];
  const bool depends_on_b = t[0] != t[1] || t[2] != t[3];
  return depends_on_a && depends_on_b;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::vector<BooleanFunction> build_all() {
  std::vector<BooleanFunction> all;
  all.reserve(16);
  for (int id = 0; id < 16; ++id) all.push_back(from_table(decode(id)));
  return all;
}

}  // namespace

std::string_view to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::Conjunctive: return "conjunctive";
    case FunctionClass::Disjunctive: return "disjunctive";
    case FunctionClass::XorLike: return "xor_like";
  }
  return "?";
}

BooleanFunction from_table(const TruthTable& table) {
  BooleanFunction f;
  f.table = table;
  f.id = static_cast<std::uint8_t>(encode(table));
  f.name = kNames[f.id].name;
  f.key = kNames[f.id].key;
  f.symmetric = table[1] == table[2];
  if (depends_on_both(table)) {
    switch (f.positive_rows()) {
      case 1: f.klass = FunctionClass::Conjunctive; break;
      case 3: f.klass = FunctionClass::Disjunctive; break;
      case 2: f.klass = FunctionClass::XorLike; break;
      default: break;
    }
  }
  return f;
}

const std::vector<BooleanFunction>& enumerate_all() {
  static const std::vector<BooleanFunction> all = build_all();
  return all;
}

const std::vector<BooleanFunction>& nontrivial_functions() {
  static const std::vector<BooleanFunction> kept = [] {
    std::vector<BooleanFunction> out;
    for (const auto& f : enumerate_all())
      if (is_nontrivial(f)) out.push_back(f);
    return out;
  }();
  return kept;
}

const BooleanFunction& function_by_id(int id) {
  if (id < 0 || id > 15) throw std::invalid_argument("function id out of range: " + std::to_string(id));
  return enumerate_all()[static_cast<std::size_t>(id)];
}

const BooleanFunction& function_by_name(std::string_view name) {
  int id = 0;
  const auto* end = name.data() + name.size();
  if (auto [ptr, ec] = std::from_chars(name.data(), end, id); ec == std::errc{} && ptr == end)
    return function_by_id(id);

  const std::string wanted = upper(name);
  for (const auto& f : enumerate_all()) {
    if (wanted == f.name || wanted == f.key) return f;
  }
  throw std::invalid_argument("unknown Boolean function: " + std::string(name));
}

bool is_nontrivial(const BooleanFunction& f) { return depends_on_both(f.table); }

std::uint8_t evaluate(const BooleanFunction& f, std::uint8_t a, std::uint8_t b) { return f(a, b); }

}  // namespace vat::logic
