#include "noisy_rm/pomdp.hpp"

#include <cstring>
#include <stdexcept>

#include "noisy_rm/belief.hpp"

namespace noisy_rm {

Pomdp::Pomdp(std::size_t n_states, std::size_t n_actions, std::size_t n_observations)
    : n_states_(n_states),
      n_actions_(n_actions),
      n_obs_(n_observations),
      transitions_(n_states * n_actions * n_states, 0.0),
      observations_((n_actions + 1) * n_states * n_observations, 0.0),
      rewards_(n_states * n_actions * n_states, 0.0),
      initial_(n_states, 0.0) {
  if (n_states == 0 || n_actions == 0 || n_observations == 0) {
    throw std::invalid_argument("POMDP needs at least one state, action and observation");
  }
}

Pomdp Pomdp::fully_observable(std::size_t n_states, std::size_t n_actions) {
  Pomdp p(n_states, n_actions, n_states);
  p.fully_observable_ = true;
  for (std::size_t s = 0; s < n_states; ++s) p.set_observation(s, s, 1.0);
  return p;
}

double Pomdp::transition(std::size_t s, std::size_t a, std::size_t next) const {
  return transitions_.at((s * n_actions_ + a) * n_states_ + next);
}

std::span<const double> Pomdp::transition_row(std::size_t s, std::size_t a) const {
  if (s >= n_states_ || a >= n_actions_) throw std::out_of_range("transition_row");
  return std::span<const double>(transitions_).subspan((s * n_actions_ + a) * n_states_, n_states_);
}

void Pomdp::set_transition(std::size_t s, std::size_t a, std::size_t next, double p) {
  transitions_.at((s * n_actions_ + a) * n_states_ + next) = p;
}

std::size_t Pomdp::obs_slot(std::optional<std::size_t> prev_action) const {
  if (!prev_action) return 0;
  if (*prev_action >= n_actions_) throw std::out_of_range("previous action out of range");
  return *prev_action + 1;
}

double Pomdp::observation(std::size_t s, std::optional<std::size_t> prev_action, std::size_t o) const {
  return observations_.at((obs_slot(prev_action) * n_states_ + s) * n_obs_ + o);
}

std::span<const double> Pomdp::observation_row(std::size_t s, std::optional<std::size_t> prev_action) const {
  if (s >= n_states_) throw std::out_of_range("observation_row");
  return std::span<const double>(observations_).subspan((obs_slot(prev_action) * n_states_ + s) * n_obs_, n_obs_);
}

void Pomdp::set_observation(std::size_t s, std::size_t o, double p) {
  for (std::size_t slot = 0; slot <= n_actions_; ++slot) observations_.at((slot * n_states_ + s) * n_obs_ + o) = p;
}

void Pomdp::set_observation_after(std::optional<std::size_t> prev_action, std::size_t s, std::size_t o, double p) {
  observations_.at((obs_slot(prev_action) * n_states_ + s) * n_obs_ + o) = p;
}

double Pomdp::reward(std::size_t s, std::size_t a, std::size_t next) const {
  return rewards_.at((s * n_actions_ + a) * n_states_ + next);
}

void Pomdp::set_reward(std::size_t s, std::size_t a, std::size_t next, double r) {
  rewards_.at((s * n_actions_ + a) * n_states_ + next) = r;
}

void Pomdp::set_initial(std::size_t s, double p) { initial_.at(s) = p; }

void Pomdp::validate() const {
  if (!is_distribution(initial_)) throw std::invalid_argument("initial distribution is not normalised");
  for (std::size_t s = 0; s < n_states_; ++s) {
    for (std::size_t a = 0; a < n_actions_; ++a) {
      if (!is_distribution(transition_row(s, a))) {
        throw std::invalid_argument("transition row (s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                                    ") is not normalised");
      }
    }
    for (std::size_t slot = 0; slot <= n_actions_; ++slot) {
      std::optional<std::size_t> prev;
      if (slot > 0) prev = slot - 1;
      const auto row = observation_row(s, prev);
      if (!is_distribution(row)) {
        throw std::invalid_argument("observation row (s=" + std::to_string(s) + ") is not normalised");
      }
      if (fully_observable_ && row[s] != 1.0) {
        throw std::invalid_argument("fully observable POMDP must emit its state as observation");
      }
    }
  }
}

bool Pomdp::bitwise_equal(const Pomdp& other) const {
  auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
  };
  return n_states_ == other.n_states_ && n_actions_ == other.n_actions_ && n_obs_ == other.n_obs_ &&
         fully_observable_ == other.fully_observable_ && same(transitions_, other.transitions_) &&
         same(observations_, other.observations_) && same(rewards_, other.rewards_) &&
         same(initial_, other.initial_);
}

}  // namespace noisy_rm
