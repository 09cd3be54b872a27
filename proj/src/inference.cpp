#include "noisy_rm/inference.hpp"

#include <cmath>

namespace noisy_rm {

std::string_view to_string(InferenceMethod m) {
  switch (m) {
    case InferenceMethod::kNaive: return "naive";
    case InferenceMethod::kIbu: return "ibu";
    case InferenceMethod::kTdm: return "tdm";
  }
  return "?";
}

Belief init_belief(const RewardMachine& rm) { return Belief::dirac(rm.size(), rm.initial()); }

RmStateId naive_update(const RewardMachine& rm, RmStateId u_hat, PropSet predicted) {
  return rm.step(u_hat, predicted).next;
}

Belief ibu_update(const RewardMachine& rm, const Belief& prior, std::span<const double> m) {
  if (m.size() != rm.num_assignments() || !is_distribution(m)) {
    throw std::invalid_argument("proposition distribution is not normalised over 2^AP");
  }
  if (prior.size() != rm.size()) throw std::invalid_argument("belief size does not match reward machine");
  std::vector<double> next(rm.size(), 0.0);
  const auto table = rm.table();
  const std::size_t n_sigma = rm.num_assignments();
  for (std::size_t u = 0; u < rm.num_states(); ++u) {
    const double mass = prior.probs()[u];
    if (mass == 0.0) continue;
    for (std::size_t s = 0; s < n_sigma; ++s) {
      if (m[s] == 0.0) continue;
      next[table[u * n_sigma + s].next.index] += mass * m[s];
    }
  }
  for (std::size_t f = rm.num_states(); f < rm.size(); ++f) next[f] += prior.probs()[f];
  return Belief(std::move(next));
}

Belief tdm_predict(const RmBeliefModel& model, const History& h, std::size_t rm_size) {
  Belief b = model(h);
  if (b.size() != rm_size) throw std::invalid_argument("RM belief model output has the wrong size");
  if (!is_distribution(b.probs())) throw std::invalid_argument("RM belief model output is not a distribution");
  return b;
}

Belief rm_marginal(const ProductPomdp& product, std::span<const double> posterior) {
  std::vector<double> m(product.num_rm_states(), 0.0);
  for (std::size_t x = 0; x < posterior.size(); ++x) m[product.rm_state(x).index] += posterior[x];
  return Belief(std::move(m));
}

namespace {

FilterResult normalise(const ProductPomdp& product, std::vector<double> unnorm) {
  double z = 0.0;
  for (double p : unnorm) z += p;
  if (!(z > 0.0)) throw ImpossibleEvidence("observation has zero likelihood under the filter prior");
  for (double& p : unnorm) p /= z;
  Belief marginal = rm_marginal(product, unnorm);
  return {std::move(unnorm), std::move(marginal)};
}

}  // namespace

FilterResult exact_filter_init(const ProductPomdp& product, std::size_t first_observation) {
  const Pomdp& p = product.pomdp();
  std::vector<double> post(p.num_states(), 0.0);
  for (std::size_t x = 0; x < p.num_states(); ++x) {
    post[x] = p.initial()[x] * p.observation(x, std::nullopt, first_observation);
  }
  return normalise(product, std::move(post));
}

FilterResult exact_filter_step(const ProductPomdp& product, std::span<const double> prior, std::size_t action,
                               std::size_t observation) {
  const Pomdp& p = product.pomdp();
  if (prior.size() != p.num_states() || !is_distribution(prior)) {
    throw std::invalid_argument("filter prior is not a distribution over product states");
  }
  std::vector<double> predicted(p.num_states(), 0.0);
  for (std::size_t x = 0; x < p.num_states(); ++x) {
    if (prior[x] == 0.0) continue;
    const auto row = p.transition_row(x, action);
    for (std::size_t y = 0; y < row.size(); ++y) predicted[y] += prior[x] * row[y];
  }
  for (std::size_t y = 0; y < p.num_states(); ++y) predicted[y] *= p.observation(y, action, observation);
  return normalise(product, std::move(predicted));
}

namespace {

InferenceMethod method_of(const AbstractionModel& model) {
  switch (model.index()) {
    case 0: return InferenceMethod::kNaive;
    case 1: return InferenceMethod::kIbu;
    default: return InferenceMethod::kTdm;
  }
}

}  // namespace

InferenceState::InferenceState(const RewardMachine& rm, AbstractionModel model)
    : rm_(&rm), method_(method_of(model)), model_(std::move(model)), belief_(init_belief(rm)) {}

InferenceState::InferenceState(const RewardMachine& rm, InferenceMethod method, AbstractionModel model)
    : InferenceState(rm, std::move(model)) {
  if (method != method_) {
    throw std::invalid_argument(std::string("abstraction model form does not match inference method ") +
                                std::string(to_string(method)));
  }
}

const Belief& InferenceState::reset(const History& h1) {
  belief_ = init_belief(*rm_);
  naive_state_.reset();
  if (method_ == InferenceMethod::kNaive) naive_state_ = rm_->initial();
  if (method_ == InferenceMethod::kTdm) belief_ = tdm_predict(std::get<RmBeliefModel>(model_), h1, rm_->size());
  return belief_;
}

const Belief& InferenceState::update(const History& h) {
  switch (method_) {
    case InferenceMethod::kNaive: {
      // Predictions freeze once a terminal state is predicted.
      if (!rm_->is_terminal(*naive_state_)) {
        naive_state_ = naive_update(*rm_, *naive_state_, std::get<PropClassifier>(model_)(h));
        belief_ = Belief::dirac(rm_->size(), *naive_state_);
      }
      break;
    }
    case InferenceMethod::kIbu:
      belief_ = ibu_update(*rm_, belief_, std::get<PropDistribution>(model_)(h));
      break;
    case InferenceMethod::kTdm:
      belief_ = tdm_predict(std::get<RmBeliefModel>(model_), h, rm_->size());
      break;
  }
  return belief_;
}

}  // namespace noisy_rm
