#include "noisy_rm/belief.hpp"

#include <cmath>
#include <stdexcept>

#include "noisy_rm/rng.hpp"

namespace noisy_rm {

bool is_distribution(std::span<const double> probs, double tol) {
  if (probs.empty()) return false;
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (!is_distribution(probs_)) throw std::invalid_argument("belief is not a probability distribution");
}

Belief Belief::dirac(std::size_t size, RmStateId at) {
  if (at.index >= size) throw std::invalid_argument("dirac belief index out of range");
  std::vector<double> p(size, 0.0);
  p[at.index] = 1.0;
  return Belief(std::move(p));
}

bool Belief::is_dirac() const {
  int ones = 0;
  for (double p : probs_) {
    if (p == 1.0) ++ones;
    else if (p != 0.0) return false;
  }
  return ones == 1;
}

RmStateId Belief::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs_.size(); ++i) {
    if (probs_[i] > probs_[best]) best = i;
  }
  return RmStateId{static_cast<std::uint32_t>(best)};
}

std::size_t sample_categorical(std::span<const double> probs, double u) {
  if (probs.empty()) throw std::invalid_argument("sample_categorical: empty distribution");
  double total = 0.0;
  for (double p : probs) total += p;
  const double threshold = u * total;
  double running = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    running += probs[i];
    last_nonzero = i;
    if (running > threshold) return i;
  }
  return last_nonzero;
}

}  // namespace noisy_rm
