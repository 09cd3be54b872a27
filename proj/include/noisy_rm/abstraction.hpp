#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "noisy_rm/belief.hpp"
#include "noisy_rm/pomdp.hpp"
#include "noisy_rm/prop_set.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace noisy_rm {

// Opaque environment token: a state, observation or action index.
using Token = std::int64_t;

// h_t = (o_1, a_1, ..., a_{t-1}, o_t). Always holds at least one observation.
class History {
 public:
  explicit History(Token first_observation) : observations_{first_observation} {}

  void append(Token action, Token observation) {
    actions_.push_back(action);
    observations_.push_back(observation);
  }

  // t, the number of observations.
  [[nodiscard]] std::size_t length() const { return observations_.size(); }
  // 1-based like the maths: observation(1) is o_1.
  [[nodiscard]] Token observation(std::size_t t) const { return observations_.at(t - 1); }
  [[nodiscard]] Token action(std::size_t t) const { return actions_.at(t - 1); }
  [[nodiscard]] Token last_observation() const { return observations_.back(); }
  [[nodiscard]] const std::vector<Token>& observations() const { return observations_; }
  [[nodiscard]] const std::vector<Token>& actions() const { return actions_; }

 private:
  std::vector<Token> observations_;
  std::vector<Token> actions_;
};

// Ground-truth L(s, a, s'). Must be deterministic.
class LabellingFunction {
 public:
  using Fn = std::function<PropSet(Token, Token, Token)>;
  explicit LabellingFunction(Fn fn) : fn_(std::move(fn)) {}
  PropSet operator()(Token s, Token a, Token next) const { return fn_(s, a, next); }

 private:
  Fn fn_;
};

// Dense distribution over 2^AP indexed by PropSet::index().
using PropDist = std::vector<double>;

PropDist point_mass(int n_aps, PropSet sigma);

// M: H -> 2^AP
struct PropClassifier {
  std::function<PropSet(const History&)> fn;
  PropSet operator()(const History& h) const { return fn(h); }
};

// M: H -> Delta(2^AP)
struct PropDistribution {
  std::function<PropDist(const History&)> fn;
  PropDist operator()(const History& h) const { return fn(h); }
};

// M: H -> Delta(U u F)
struct RmBeliefModel {
  std::function<Belief(const History&)> fn;
  Belief operator()(const History& h) const { return fn(h); }
};

using AbstractionModel = std::variant<PropClassifier, PropDistribution, RmBeliefModel>;

// Models that recover L (and u_t) exactly in a fully observable environment,
// where observation tokens are state indices. Each throws std::invalid_argument
// if env is not fully observable. At t = 1 they return the empty set, the
// point mass on the empty set, and the point mass on the initial RM state.
// exact_rm_belief keeps a reference to rm, which must outlive the model.
PropClassifier exact_classifier(const Pomdp& env, LabellingFunction label);
PropDistribution exact_prop_distribution(const Pomdp& env, LabellingFunction label, int n_aps);
RmBeliefModel exact_rm_belief(const Pomdp& env, const RewardMachine& rm, LabellingFunction label);

}  // namespace noisy_rm
