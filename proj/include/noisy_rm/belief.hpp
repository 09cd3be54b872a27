#pragma once

#include <span>
#include <vector>

#include "noisy_rm/reward_machine.hpp"

namespace noisy_rm {

inline constexpr double kNormTolerance = 1e-9;

// Distribution over the RM states U followed by F.
class Belief {
 public:
  Belief() = default;
  // Throws std::invalid_argument unless probs is a distribution (tolerance 1e-9).
  explicit Belief(std::vector<double> probs);

  static Belief dirac(std::size_t size, RmStateId at);

  [[nodiscard]] std::size_t size() const { return probs_.size(); }
  [[nodiscard]] double operator[](RmStateId u) const { return probs_.at(u.index); }
  [[nodiscard]] std::span<const double> probs() const { return probs_; }
  [[nodiscard]] bool is_dirac() const;
  // Mode, lowest index on ties.
  [[nodiscard]] RmStateId argmax() const;

  friend bool operator==(const Belief&, const Belief&) = default;

 private:
  std::vector<double> probs_;
};

// True iff all entries are >= 0 and they sum to 1 within tol.
bool is_distribution(std::span<const double> probs, double tol = kNormTolerance);

// Total-variation distance between equal-length distributions.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace noisy_rm
