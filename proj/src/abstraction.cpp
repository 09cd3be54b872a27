#include "noisy_rm/abstraction.hpp"

#include <stdexcept>

namespace noisy_rm {

namespace {

void require_mdp(const Pomdp& env) {
  if (!env.is_fully_observable()) {
    throw std::invalid_argument("exact abstraction models need a fully observable environment");
  }
}

PropSet last_label(const LabellingFunction& label, const History& h) {
  const std::size_t t = h.length();
  if (t < 2) return PropSet::empty();
  return label(h.observation(t - 1), h.action(t - 1), h.observation(t));
}

}  // namespace

PropDist point_mass(int n_aps, PropSet sigma) {
  PropDist d(std::size_t{1} << n_aps, 0.0);
  d.at(sigma.index()) = 1.0;
  return d;
}

PropClassifier exact_classifier(const Pomdp& env, LabellingFunction label) {
  require_mdp(env);
  return PropClassifier{[label = std::move(label)](const History& h) { return last_label(label, h); }};
}

PropDistribution exact_prop_distribution(const Pomdp& env, LabellingFunction label, int n_aps) {
  require_mdp(env);
  return PropDistribution{
      [label = std::move(label), n_aps](const History& h) { return point_mass(n_aps, last_label(label, h)); }};
}

RmBeliefModel exact_rm_belief(const Pomdp& env, const RewardMachine& rm, LabellingFunction label) {
  require_mdp(env);
  return RmBeliefModel{[&rm, label = std::move(label)](const History& h) {
    RmStateId u = rm.initial();
    for (std::size_t t = 2; t <= h.length() && !rm.is_terminal(u); ++t) {
      u = rm.step(u, label(h.observation(t - 1), h.action(t - 1), h.observation(t))).next;
    }
    return Belief::dirac(rm.size(), u);
  }};
}

}  // namespace noisy_rm
