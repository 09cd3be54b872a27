#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace noisy_rm {

// Finite POMDP <S, O, A, P, R, omega, mu> stored as dense tables.
//
// The observation table has one slot per "previous action" plus a leading
// slot for the first observation of an episode, so both omega(o | s) and
// omega(o | s, a_prev) fit the same interface. Action-independent models
// write every slot through set_observation().
class Pomdp {
 public:
  Pomdp(std::size_t n_states, std::size_t n_actions, std::size_t n_observations);

  // An MDP: n_observations == n_states and the observation is the state.
  static Pomdp fully_observable(std::size_t n_states, std::size_t n_actions);

  [[nodiscard]] std::size_t num_states() const { return n_states_; }
  [[nodiscard]] std::size_t num_actions() const { return n_actions_; }
  [[nodiscard]] std::size_t num_observations() const { return n_obs_; }
  [[nodiscard]] bool is_fully_observable() const { return fully_observable_; }

  [[nodiscard]] double transition(std::size_t s, std::size_t a, std::size_t next) const;
  [[nodiscard]] std::span<const double> transition_row(std::size_t s, std::size_t a) const;
  void set_transition(std::size_t s, std::size_t a, std::size_t next, double p);

  // prev_action is empty for the first observation of an episode.
  [[nodiscard]] double observation(std::size_t s, std::optional<std::size_t> prev_action, std::size_t o) const;
  [[nodiscard]] std::span<const double> observation_row(std::size_t s, std::optional<std::size_t> prev_action) const;
  void set_observation(std::size_t s, std::size_t o, double p);
  // Writes one slot only; an empty prev_action addresses the episode-start slot.
  void set_observation_after(std::optional<std::size_t> prev_action, std::size_t s, std::size_t o, double p);

  [[nodiscard]] double reward(std::size_t s, std::size_t a, std::size_t next) const;
  void set_reward(std::size_t s, std::size_t a, std::size_t next, double r);

  [[nodiscard]] std::span<const double> initial() const { return initial_; }
  void set_initial(std::size_t s, double p);

  // Throws std::invalid_argument naming the first row that is not a distribution.
  void validate() const;

  // Bitwise table equality (distinguishes -0.0 from 0.0, unlike operator==).
  [[nodiscard]] bool bitwise_equal(const Pomdp& other) const;

 private:
  [[nodiscard]] std::size_t obs_slot(std::optional<std::size_t> prev_action) const;

  std::size_t n_states_, n_actions_, n_obs_;
  bool fully_observable_ = false;
  std::vector<double> transitions_;   // [s][a][s']
  std::vector<double> observations_;  // [slot][s][o], slot 0 = episode start, slot a+1 = after a
  std::vector<double> rewards_;       // [s][a][s']
  std::vector<double> initial_;       // [s]
};

}  // namespace noisy_rm
