#include "noisy_rm/experiment.hpp"

#include <stdexcept>

namespace noisy_rm {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kOracle: return "oracle";
    case Method::kMemory: return "memory";
    case Method::kNaive: return "naive";
    case Method::kIbu: return "ibu";
    case Method::kTdm: return "tdm";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(discount > 0.0 && discount <= 1.0)) throw std::invalid_argument("discount must lie in (0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (total_steps < 0) throw std::invalid_argument("total steps must be non-negative");
  if (eval_every <= 0) throw std::invalid_argument("evaluation interval must be positive");
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
}

namespace {

std::optional<InferenceState> make_inference(const RewardMachine& rm, Method m) {
  if (m == Method::kOracle || m == Method::kMemory) return std::nullopt;
  gold::ToyModels models = gold::toy_models(rm);
  switch (m) {
    case Method::kNaive: return InferenceState(rm, InferenceMethod::kNaive, std::move(models.naive));
    case Method::kIbu: return InferenceState(rm, InferenceMethod::kIbu, std::move(models.ibu));
    default: return InferenceState(rm, InferenceMethod::kTdm, std::move(models.tdm));
  }
}

}  // namespace

GoldEpisode::GoldEpisode(const RewardMachine& rm, Method method, int horizon)
    : rm_(rm),
      method_(method),
      env_(horizon),
      label_(gold::labelling(rm)),
      rm_state_(rm.initial()),
      history_(gold::to_index(gold::kStart)),
      memory_(static_cast<int>(gold::kMemoryCells.size())),
      inference_(make_inference(rm, method)) {
  reset();
}

void GoldEpisode::reset() {
  const gold::Position start = env_.reset();
  rm_state_ = rm_.initial();
  history_ = History(gold::to_index(start));
  memory_.clear();
  if (inference_) inference_->reset(history_);
}

GoldEpisode::Outcome GoldEpisode::step(gold::Action a) {
  if (rm_.is_terminal(rm_state_)) throw std::logic_error("step after episode end");
  const gold::Position from = env_.position();
  const gold::StepResult env_step = env_.step(a);
  const PropSet sigma = label_(gold::to_index(from), static_cast<Token>(a), gold::to_index(env_step.position));
  const auto rm_out = rm_.step(rm_state_, sigma);
  rm_state_ = rm_out.next;

  if (a == gold::Action::kDig) {
    if (const int slot = gold::memory_slot(from); slot >= 0) memory_.set(slot);
  }
  history_.append(static_cast<Token>(a), gold::to_index(env_step.position));
  if (inference_) inference_->update(history_);

  const bool terminal = rm_.is_terminal(rm_state_);
  return {rm_out.reward + env_step.reward, terminal, !terminal && env_step.truncated};
}

QInput GoldEpisode::input() const {
  QInput in;
  in.location = gold::to_index(env_.position());
  in.memory = memory_;
  switch (method_) {
    case Method::kOracle:
      in.task = rm_state_;
      in.memory = MemoryFlags();
      break;
    case Method::kMemory: break;
    default: in.task = inference_->belief(); break;
  }
  return in;
}

LinearQ make_q(Method m, const RewardMachine& rm) {
  QDims dims{gold::kNumCells, static_cast<int>(rm.num_states()), gold::kNumActions,
             static_cast<int>(gold::kMemoryCells.size())};
  switch (m) {
    case Method::kOracle: return LinearQ(Parameterization::kOracle, dims);
    case Method::kMemory: return LinearQ(Parameterization::kMemoryOnly, dims);
    default: return LinearQ(Parameterization::kBeliefConditioned, dims);
  }
}

EvalResult evaluate_policy(const LinearQ& q, Method m, const RewardMachine& rm, int horizon, double discount) {
  EvalResult res;
  GoldEpisode ep(rm, m, horizon);
  Rng unused(0);
  double scale = 1.0;
  res.positions.push_back(ep.position());
  while (true) {
    const auto a = static_cast<gold::Action>(select_action(q, ep.input(), 0.0, unused, TieBreak::kLowestIndex));
    const auto out = ep.step(a);
    res.actions.push_back(a);
    res.positions.push_back(ep.position());
    res.ret += out.reward;
    res.ret_discounted += scale * out.reward;
    scale *= discount;
    if (out.terminal || out.truncated) {
      res.terminated = out.terminal;
      break;
    }
  }
  return res;
}

TrainResult train_run(Method m, const TrainConfig& cfg) {
  cfg.validate();
  const RewardMachine rm = gold::reward_machine();
  LinearQ q = make_q(m, rm);
  LearningCurve curve;
  Rng rng(cfg.seed);
  GoldEpisode ep(rm, m, cfg.horizon);
  QInput in = ep.input();

  for (std::int64_t step = 1; step <= cfg.total_steps; ++step) {
    const int a = select_action(q, in, cfg.epsilon, rng, TieBreak::kRandom);
    const auto out = ep.step(static_cast<gold::Action>(a));
    QInput next = ep.input();
    q.td_update({std::move(in), a, out.reward, next, out.terminal}, cfg.learning_rate, cfg.discount);
    if (out.terminal || out.truncated) {
      ep.reset();
      in = ep.input();
    } else {
      in = std::move(next);
    }
    if (step % cfg.eval_every == 0) {
      const EvalResult ev = evaluate_policy(q, m, rm, cfg.horizon, cfg.discount);
      curve.push_back({step, ev.ret, ev.ret_discounted});
    }
  }
  return {std::move(curve), std::move(q)};
}

double final_return(const LearningCurve& curve, std::size_t n) {
  if (curve.empty()) throw std::invalid_argument("final_return of an empty curve");
  const std::size_t k = std::min(n, curve.size());
  double sum = 0.0;
  for (std::size_t i = curve.size() - k; i < curve.size(); ++i) sum += curve[i].ret;
  return sum / static_cast<double>(k);
}

}  // namespace noisy_rm
