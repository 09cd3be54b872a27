#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "noisy_rm/belief.hpp"
#include "noisy_rm/reward_machine.hpp"
#include "noisy_rm/rng.hpp"

namespace noisy_rm {

// One "already dug here" flag per tracked cell. Flags only go false -> true
// within an episode.
class MemoryFlags {
 public:
  MemoryFlags() = default;
  explicit MemoryFlags(int count);

  [[nodiscard]] int size() const { return count_; }
  [[nodiscard]] bool test(int i) const { return (bits_ >> i) & 1U; }
  [[nodiscard]] int num_set() const;
  void set(int i);
  void clear() { bits_ = 0; }

  friend bool operator==(const MemoryFlags&, const MemoryFlags&) = default;

 private:
  std::uint32_t bits_ = 0;
  int count_ = 0;
};

// Linear Q-value parameterisations:
//   kOracle:            Q(loc, u, a), a plain table
//   kMemoryOnly:        Q1(loc, a) + 1/k sum_i Q2(loc, m_i, a)
//   kBeliefConditioned: sum_{u in U} b[u] (Q1(u) + Q2(loc, u, a) + 1/k sum_i Q3(loc, u, m_i, a))
// where m_i in {0, 1} is the value of memory flag i and k the flag count.
// Belief mass on terminal states contributes nothing (terminal value is zero).
enum class Parameterization { kOracle, kMemoryOnly, kBeliefConditioned };

struct QDims {
  int locations = 0;
  int rm_states = 0;  // |U|, non-terminal only
  int actions = 0;
  int memory = 0;
};

struct QInput {
  int location = 0;
  // RmStateId for kOracle, Belief for kBeliefConditioned, nothing for kMemoryOnly.
  std::variant<std::monostate, RmStateId, Belief> task;
  MemoryFlags memory;
};

struct Feature {
  std::size_t index;
  double value;
};

enum class TieBreak { kRandom, kLowestIndex };

struct Transition {
  QInput input;
  int action = 0;
  double reward = 0.0;
  QInput next;
  bool terminal = false;
};

class LinearQ {
 public:
  LinearQ(Parameterization kind, QDims dims);

  [[nodiscard]] Parameterization kind() const { return kind_; }
  [[nodiscard]] const QDims& dims() const { return dims_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] std::span<double> weights() { return weights_; }

  // Throws std::invalid_argument if input does not fit the parameterisation.
  [[nodiscard]] double value(const QInput& input, int action) const;
  // d value / d weights; sparse, duplicates already merged.
  [[nodiscard]] std::vector<Feature> gradient(const QInput& input, int action) const;
  [[nodiscard]] double max_value(const QInput& input) const;

  // One-step Q-learning: w += alpha * (target - Q(s,a)) * grad, with
  // target = r if terminal, else r + gamma * max_a' Q(s', a'). Returns the TD error.
  double td_update(const Transition& tr, double alpha, double gamma);

 private:
  template <typename Fn>
  void for_each_feature(const QInput& input, int action, Fn&& fn) const;

  Parameterization kind_;
  QDims dims_;
  std::vector<double> weights_;
};

// Epsilon-greedy. Greedy ties go to a uniform random maximiser during
// training and to the lowest action index in evaluation.
int select_action(const LinearQ& q, const QInput& input, double epsilon, Rng& rng, TieBreak ties);

}  // namespace noisy_rm
