#pragma once

#include <cstddef>
#include <cstdint>

namespace noisy_rm {

// Upper bound on |AP|; keeps the dense transition table at most 2^16 rows per state.
inline constexpr int kMaxPropositions = 16;

// A truth assignment over an ordered proposition list. Bit i is set iff
// proposition i holds. The bit pattern doubles as the row index into dense
// tables over 2^AP.
class PropSet {
 public:
  constexpr PropSet() = default;
  constexpr explicit PropSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr PropSet empty() { return PropSet{}; }

  [[nodiscard]] constexpr bool contains(int prop) const { return (bits_ >> prop) & 1U; }
  [[nodiscard]] constexpr PropSet with(int prop) const { return PropSet{bits_ | (1U << prop)}; }
  [[nodiscard]] constexpr PropSet without(int prop) const { return PropSet{bits_ & ~(1U << prop)}; }
  [[nodiscard]] constexpr std::uint32_t bits() const { return bits_; }
  [[nodiscard]] constexpr std::size_t index() const { return bits_; }
  [[nodiscard]] constexpr bool is_empty() const { return bits_ == 0; }

  // True iff no bit at position >= n_props is set.
  [[nodiscard]] constexpr bool fits(int n_props) const {
    return n_props >= 32 || (bits_ >> n_props) == 0;
  }

  friend constexpr bool operator==(PropSet, PropSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

}  // namespace noisy_rm
