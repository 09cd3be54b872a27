#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "noisy_rm/abstraction.hpp"
#include "noisy_rm/belief.hpp"
#include "noisy_rm/product.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace noisy_rm {

enum class InferenceMethod { kNaive, kIbu, kTdm };

std::string_view to_string(InferenceMethod m);

// Point mass on the initial RM state.
Belief init_belief(const RewardMachine& rm);

// Naive: u_hat_t = delta_u(u_hat_{t-1}, M(h_t)). Throws if u_hat is terminal.
RmStateId naive_update(const RewardMachine& rm, RmStateId u_hat, PropSet predicted);

// Independent belief updating:
//   b_t[u] = sum_{sigma, u' in U} 1[delta_u(u', sigma) = u] * b_{t-1}[u'] * m[sigma]
// Mass already on terminal states is carried over unchanged. Throws
// std::invalid_argument if m is not a distribution over 2^AP (tolerance 1e-9).
Belief ibu_update(const RewardMachine& rm, const Belief& prior, std::span<const double> m);

// TDM: the model's output, checked to be a belief of the right size.
Belief tdm_predict(const RmBeliefModel& model, const History& h, std::size_t rm_size);

class ImpossibleEvidence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FilterResult {
  std::vector<double> posterior;  // over product states
  Belief rm_marginal;
};

// Forward filtering on an enumerable product: the exact Pr(s_t, u_t | h_t).
// init conditions mu' on o_1; step predicts through P' and weights by
// omega'(o | ., a). Throws ImpossibleEvidence if o has zero likelihood.
FilterResult exact_filter_init(const ProductPomdp& product, std::size_t first_observation);
FilterResult exact_filter_step(const ProductPomdp& product, std::span<const double> prior, std::size_t action,
                               std::size_t observation);

Belief rm_marginal(const ProductPomdp& product, std::span<const double> posterior);

// Runs one inference method over a growing history. The method is fixed by
// the model's form: classifier -> Naive, distribution -> IBU, belief -> TDM.
class InferenceState {
 public:
  // rm must outlive this object.
  InferenceState(const RewardMachine& rm, AbstractionModel model);
  // Rejects a model whose form does not match method.
  InferenceState(const RewardMachine& rm, InferenceMethod method, AbstractionModel model);

  // Belief at t = 1.
  const Belief& reset(const History& h1);
  // Consumes h_t for t > 1; h must extend the history last seen by one step.
  const Belief& update(const History& h);

  [[nodiscard]] InferenceMethod method() const { return method_; }
  [[nodiscard]] const Belief& belief() const { return belief_; }
  // Naive only: the discrete prediction behind the Dirac belief.
  [[nodiscard]] std::optional<RmStateId> discrete_state() const { return naive_state_; }

 private:
  const RewardMachine* rm_;
  InferenceMethod method_;
  AbstractionModel model_;
  Belief belief_;
  std::optional<RmStateId> naive_state_;
};

}  // namespace noisy_rm
