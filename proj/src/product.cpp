#include "noisy_rm/product.hpp"

#include <stdexcept>

namespace noisy_rm {

ProductPomdp build_product(const Pomdp& env, const RewardMachine& rm, const LabellingFunction& label) {
  env.validate();
  const std::size_t n_env = env.num_states();
  const std::size_t n_rm = rm.size();
  const std::size_t n_act = env.num_actions();
  Pomdp p(n_env * n_rm, n_act, env.num_observations());
  auto idx = [n_rm](std::size_t s, std::size_t u) { return s * n_rm + u; };

  for (std::size_t s = 0; s < n_env; ++s) {
    p.set_initial(idx(s, rm.initial().index), env.initial()[s]);
    for (std::size_t u = 0; u < n_rm; ++u) {
      const RmStateId uid{static_cast<std::uint32_t>(u)};
      const std::size_t from = idx(s, u);
      for (std::size_t slot = 0; slot <= n_act; ++slot) {
        std::optional<std::size_t> prev;
        if (slot > 0) prev = slot - 1;
        for (std::size_t o = 0; o < env.num_observations(); ++o) {
          p.set_observation_after(prev, from, o, env.observation(s, prev, o));
        }
      }
      for (std::size_t a = 0; a < n_act; ++a) {
        if (rm.is_terminal(uid)) {
          p.set_transition(from, a, from, 1.0);
          continue;
        }
        for (std::size_t next = 0; next < n_env; ++next) {
          const double prob = env.transition(s, a, next);
          if (prob == 0.0) continue;
          const PropSet sigma = label(static_cast<Token>(s), static_cast<Token>(a), static_cast<Token>(next));
          if (!sigma.fits(rm.num_aps())) {
            throw std::invalid_argument("labelling function emits undeclared propositions on transition (" +
                                        std::to_string(s) + ", " + std::to_string(a) + ", " +
                                        std::to_string(next) + ")");
          }
          const auto out = rm.step(uid, sigma);
          const std::size_t to = idx(next, out.next.index);
          p.set_transition(from, a, to, p.transition(from, a, to) + prob);
          p.set_reward(from, a, to, out.reward + env.reward(s, a, next));
        }
      }
    }
  }
  p.validate();
  return ProductPomdp(std::move(p), n_env, n_rm, rm.num_states());
}

NoisyRmExecution::NoisyRmExecution(const Pomdp& env, const RewardMachine& rm, LabellingFunction label)
    : env_(env), rm_(rm), label_(std::move(label)), rm_state_(rm.initial()) {}

std::size_t NoisyRmExecution::reset(Rng& rng) {
  state_ = sample_categorical(env_.initial(), rng.uniform());
  rm_state_ = rm_.initial();
  return sample_categorical(env_.observation_row(state_, std::nullopt), rng.uniform());
}

NoisyRmExecution::Step NoisyRmExecution::step(std::size_t action, Rng& rng) {
  if (done()) throw std::logic_error("step after episode end");
  const std::size_t next = sample_categorical(env_.transition_row(state_, action), rng.uniform());
  const std::size_t obs = sample_categorical(env_.observation_row(next, action), rng.uniform());
  const PropSet sigma = label_(static_cast<Token>(state_), static_cast<Token>(action), static_cast<Token>(next));
  const auto out = rm_.step(rm_state_, sigma);
  const double reward = out.reward + env_.reward(state_, action, next);
  state_ = next;
  rm_state_ = out.next;
  return {obs, reward, sigma, done()};
}

std::size_t ProductExecution::reset(Rng& rng) {
  const Pomdp& p = product_.pomdp();
  state_ = sample_categorical(p.initial(), rng.uniform());
  return sample_categorical(p.observation_row(state_, std::nullopt), rng.uniform());
}

NoisyRmExecution::Step ProductExecution::step(std::size_t action, Rng& rng) {
  if (done()) throw std::logic_error("step after episode end");
  const Pomdp& p = product_.pomdp();
  const std::size_t next = sample_categorical(p.transition_row(state_, action), rng.uniform());
  const std::size_t obs = sample_categorical(p.observation_row(next, action), rng.uniform());
  const double reward = p.reward(state_, action, next);
  state_ = next;
  return {obs, reward, PropSet{}, done()};
}

PairedRollout paired_rollout(const Pomdp& env, const RewardMachine& rm, const LabellingFunction& label,
                             const ProductPomdp& product, std::span<const std::size_t> actions,
                             std::uint64_t seed) {
  PairedRollout out;
  if (actions.empty()) return out;

  NoisyRmExecution direct(env, rm, label);
  Rng direct_rng(seed);
  direct.reset(direct_rng);
  for (std::size_t a : actions) {
    const auto st = direct.step(a, direct_rng);
    out.env_rewards.push_back(st.reward);
    if (st.done) break;
  }

  ProductExecution prod(product);
  Rng prod_rng(seed);
  prod.reset(prod_rng);
  for (std::size_t a : actions) {
    const auto st = prod.step(a, prod_rng);
    out.product_rewards.push_back(st.reward);
    if (st.done) break;
  }

  out.lengths_match = out.env_rewards.size() == out.product_rewards.size();
  return out;
}

}  // namespace noisy_rm
