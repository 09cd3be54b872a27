#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "noisy_rm/abstraction.hpp"
#include "noisy_rm/pomdp.hpp"
#include "noisy_rm/reward_machine.hpp"
#include "noisy_rm/rng.hpp"

namespace noisy_rm {

// POMDP over S x (U u F) whose Markovian reward reproduces the reward
// machine's. Product state (s, u) has index s * |U u F| + u.
//
// P'((s',u') | (s,u), a) = P(s' | s, a) * 1[u' = delta_u(u, L(s,a,s'))]
// R'((s,u), a, (s',u'))  = delta_r(u, L(s,a,s')) + R_env(s, a, s')
// omega'(o | (s,u), a)   = omega(o | s, a)
// mu'(s, u)              = mu(s) * 1[u = u_1]
// States with u in F are absorbing with zero reward.
class ProductPomdp {
 public:
  [[nodiscard]] const Pomdp& pomdp() const { return pomdp_; }
  [[nodiscard]] std::size_t num_env_states() const { return n_env_; }
  [[nodiscard]] std::size_t num_rm_states() const { return n_rm_; }
  [[nodiscard]] std::size_t num_states() const { return n_env_ * n_rm_; }
  [[nodiscard]] std::size_t index(std::size_t s, RmStateId u) const { return s * n_rm_ + u.index; }
  [[nodiscard]] std::size_t env_state(std::size_t product_state) const { return product_state / n_rm_; }
  [[nodiscard]] RmStateId rm_state(std::size_t product_state) const {
    return RmStateId{static_cast<std::uint32_t>(product_state % n_rm_)};
  }
  [[nodiscard]] bool is_terminal(std::size_t product_state) const {
    return rm_state(product_state).index >= n_rm_nonterminal_;
  }

 private:
  friend ProductPomdp build_product(const Pomdp&, const RewardMachine&, const LabellingFunction&);
  ProductPomdp(Pomdp p, std::size_t n_env, std::size_t n_rm, std::size_t n_nonterminal)
      : pomdp_(std::move(p)), n_env_(n_env), n_rm_(n_rm), n_rm_nonterminal_(n_nonterminal) {}

  Pomdp pomdp_;
  std::size_t n_env_, n_rm_, n_rm_nonterminal_;
};

// Note the signature: no abstraction model goes in, so the product cannot
// depend on one. Labels are queried for every support transition; a label
// naming undeclared propositions throws std::invalid_argument.
ProductPomdp build_product(const Pomdp& env, const RewardMachine& rm, const LabellingFunction& label);

// Direct execution of <E, R, L>: samples the environment, labels each
// transition with L and advances the reward machine. Each step draws exactly
// two uniforms (transition, then observation); reset draws two as well.
class NoisyRmExecution {
 public:
  struct Step {
    std::size_t observation;
    double reward;
    PropSet label;
    bool done;
  };

  NoisyRmExecution(const Pomdp& env, const RewardMachine& rm, LabellingFunction label);

  std::size_t reset(Rng& rng);
  Step step(std::size_t action, Rng& rng);

  [[nodiscard]] std::size_t state() const { return state_; }
  [[nodiscard]] RmStateId rm_state() const { return rm_state_; }
  [[nodiscard]] bool done() const { return rm_.is_terminal(rm_state_); }

 private:
  const Pomdp& env_;
  const RewardMachine& rm_;
  LabellingFunction label_;
  std::size_t state_ = 0;
  RmStateId rm_state_;
};

// Same contract as NoisyRmExecution::step, run on the product tables.
class ProductExecution {
 public:
  explicit ProductExecution(const ProductPomdp& product) : product_(product) {}

  std::size_t reset(Rng& rng);
  NoisyRmExecution::Step step(std::size_t action, Rng& rng);

  [[nodiscard]] std::size_t state() const { return state_; }
  [[nodiscard]] bool done() const { return product_.is_terminal(state_); }

 private:
  const ProductPomdp& product_;
  std::size_t state_ = 0;
};

struct PairedRollout {
  std::vector<double> env_rewards;
  std::vector<double> product_rewards;
  // False when one side terminated earlier than the other.
  bool lengths_match = true;
};

// Drives both executions with generators seeded identically. An episode ends
// at the first terminal RM state; remaining actions are ignored.
PairedRollout paired_rollout(const Pomdp& env, const RewardMachine& rm, const LabellingFunction& label,
                             const ProductPomdp& product, std::span<const std::size_t> actions,
                             std::uint64_t seed);

}  // namespace noisy_rm
