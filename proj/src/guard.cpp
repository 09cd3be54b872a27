#include "noisy_rm/guard.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace noisy_rm {

namespace {
constexpr std::size_t kWordBits = 64;
}

TruthTable::TruthTable(int n_props, bool value) : n_props_(n_props) {
  if (n_props < 0 || n_props > kMaxPropositions) {
    throw std::invalid_argument("truth table proposition count out of range");
  }
  const std::size_t n_words = (size() + kWordBits - 1) / kWordBits;
  words_.assign(n_words, value ? ~std::uint64_t{0} : 0);
  clear_tail();
}

TruthTable TruthTable::projection(int n_props, int prop) {
  if (prop < 0 || prop >= n_props) throw std::invalid_argument("proposition index out of range");
  TruthTable t(n_props);
  for (std::size_t s = 0; s < t.size(); ++s) {
    if ((s >> prop) & 1U) t.words_[s / kWordBits] |= std::uint64_t{1} << (s % kWordBits);
  }
  return t;
}

bool TruthTable::test(PropSet sigma) const {
  const std::size_t s = sigma.index();
  return (words_.at(s / kWordBits) >> (s % kWordBits)) & 1U;
}

void TruthTable::set(PropSet sigma, bool value) {
  const std::size_t s = sigma.index();
  auto& w = words_.at(s / kWordBits);
  const std::uint64_t bit = std::uint64_t{1} << (s % kWordBits);
  w = value ? (w | bit) : (w & ~bit);
}

std::size_t TruthTable::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

TruthTable& TruthTable::operator&=(const TruthTable& other) {
  if (other.n_props_ != n_props_) throw std::invalid_argument("truth table size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

TruthTable& TruthTable::operator|=(const TruthTable& other) {
  if (other.n_props_ != n_props_) throw std::invalid_argument("truth table size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

TruthTable TruthTable::operator~() const {
  TruthTable t = *this;
  for (auto& w : t.words_) w = ~w;
  t.clear_tail();
  return t;
}

void TruthTable::clear_tail() {
  const std::size_t used = size() % kWordBits;
  if (used != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << used) - 1;
}

Guard Guard::constant(bool value) {
  Guard g;
  g.kind_ = Kind::kConstant;
  g.value_ = value;
  return g;
}

Guard Guard::prop(int index) {
  if (index < 0 || index >= kMaxPropositions) throw std::invalid_argument("proposition index out of range");
  Guard g;
  g.kind_ = Kind::kProp;
  g.prop_ = index;
  return g;
}

Guard Guard::negate(Guard operand) {
  Guard g;
  g.kind_ = Kind::kNot;
  g.children_.push_back(std::move(operand));
  return g;
}

Guard Guard::conjunction(Guard lhs, Guard rhs) {
  Guard g;
  g.kind_ = Kind::kAnd;
  g.children_.push_back(std::move(lhs));
  g.children_.push_back(std::move(rhs));
  return g;
}

Guard Guard::disjunction(Guard lhs, Guard rhs) {
  Guard g;
  g.kind_ = Kind::kOr;
  g.children_.push_back(std::move(lhs));
  g.children_.push_back(std::move(rhs));
  return g;
}

Guard Guard::otherwise(TruthTable uncovered) {
  Guard g;
  g.kind_ = Kind::kOtherwise;
  g.uncovered_ = std::move(uncovered);
  return g;
}

bool Guard::evaluate(PropSet sigma) const {
  switch (kind_) {
    case Kind::kConstant: return value_;
    case Kind::kProp: return sigma.contains(prop_);
    case Kind::kNot: return !children_[0].evaluate(sigma);
    case Kind::kAnd: return children_[0].evaluate(sigma) && children_[1].evaluate(sigma);
    case Kind::kOr: return children_[0].evaluate(sigma) || children_[1].evaluate(sigma);
    case Kind::kOtherwise: return uncovered_.test(sigma);
  }
  return false;
}

TruthTable Guard::truth_table(int n_props) const {
  switch (kind_) {
    case Kind::kConstant: return TruthTable(n_props, value_);
    case Kind::kProp: return TruthTable::projection(n_props, prop_);
    case Kind::kNot: return ~children_[0].truth_table(n_props);
    case Kind::kAnd: return children_[0].truth_table(n_props) & children_[1].truth_table(n_props);
    case Kind::kOr: return children_[0].truth_table(n_props) | children_[1].truth_table(n_props);
    case Kind::kOtherwise:
      if (uncovered_.num_props() != n_props) throw std::invalid_argument("otherwise guard size mismatch");
      return uncovered_;
  }
  return TruthTable(n_props);
}

int Guard::max_prop() const {
  int m = kind_ == Kind::kProp ? prop_ : -1;
  for (const auto& c : children_) m = std::max(m, c.max_prop());
  return m;
}

std::string Guard::to_string(std::span<const std::string> aps) const {
  switch (kind_) {
    case Kind::kConstant: return value_ ? "true" : "false";
    case Kind::kProp: return aps[static_cast<std::size_t>(prop_)];
    case Kind::kNot: return "!" + children_[0].to_string(aps);
    case Kind::kAnd:
      return "(" + children_[0].to_string(aps) + " & " + children_[1].to_string(aps) + ")";
    case Kind::kOr:
      return "(" + children_[0].to_string(aps) + " | " + children_[1].to_string(aps) + ")";
    case Kind::kOtherwise: return "o/w";
  }
  return {};
}

}  // namespace noisy_rm
