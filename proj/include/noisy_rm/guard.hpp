#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "noisy_rm/prop_set.hpp"

namespace noisy_rm {

// Bitset over all 2^n assignments of n propositions; bit sigma is the value
// of some formula under assignment sigma.
class TruthTable {
 public:
  TruthTable() = default;
  explicit TruthTable(int n_props, bool value = false);

  // The table of proposition `prop` itself.
  static TruthTable projection(int n_props, int prop);

  [[nodiscard]] int num_props() const { return n_props_; }
  [[nodiscard]] std::size_t size() const { return std::size_t{1} << n_props_; }
  [[nodiscard]] bool test(PropSet sigma) const;
  void set(PropSet sigma, bool value);
  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] bool none() const { return count() == 0; }

  TruthTable& operator&=(const TruthTable& other);
  TruthTable& operator|=(const TruthTable& other);
  [[nodiscard]] TruthTable operator~() const;
  friend TruthTable operator&(TruthTable a, const TruthTable& b) { return a &= b; }
  friend TruthTable operator|(TruthTable a, const TruthTable& b) { return a |= b; }
  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  void clear_tail();

  int n_props_ = 0;
  std::vector<std::uint64_t> words_;
};

// Propositional edge condition. OTHERWISE guards are produced by the
// validator only; they carry the set of assignments no user edge covers.
class Guard {
 public:
  enum class Kind { kConstant, kProp, kNot, kAnd, kOr, kOtherwise };

  static Guard constant(bool value);
  static Guard prop(int index);
  static Guard negate(Guard operand);
  static Guard conjunction(Guard lhs, Guard rhs);
  static Guard disjunction(Guard lhs, Guard rhs);
  static Guard otherwise(TruthTable uncovered);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool value() const { return value_; }
  [[nodiscard]] int prop_index() const { return prop_; }
  [[nodiscard]] const std::vector<Guard>& children() const { return children_; }

  // Direct recursive evaluation.
  [[nodiscard]] bool evaluate(PropSet sigma) const;

  // Word-parallel compilation over every assignment of n_props propositions.
  [[nodiscard]] TruthTable truth_table(int n_props) const;

  // Highest proposition index referenced, or -1.
  [[nodiscard]] int max_prop() const;

  // Renders in the RM file guard syntax; fully parenthesised binary nodes.
  [[nodiscard]] std::string to_string(std::span<const std::string> aps) const;

 private:
  Kind kind_ = Kind::kConstant;
  bool value_ = false;
  int prop_ = -1;
  std::vector<Guard> children_;
  TruthTable uncovered_;
};

}  // namespace noisy_rm
