#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "noisy_rm/abstraction.hpp"
#include "noisy_rm/gold_mining.hpp"
#include "noisy_rm/inference.hpp"
#include "noisy_rm/linear_q.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace noisy_rm {

// Policy families compared on Gold Mining.
//   oracle: sees the true RM state
//   memory: sees only location and dig memory
//   naive/ibu/tdm: see location, dig memory and an inferred RM belief
enum class Method { kOracle, kMemory, kNaive, kIbu, kTdm };

inline constexpr Method kAllMethods[] = {Method::kOracle, Method::kMemory, Method::kNaive, Method::kIbu,
                                         Method::kTdm};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct TrainConfig {
  double learning_rate = 0.01;
  double discount = 0.99;
  double epsilon = 0.2;
  std::int64_t total_steps = 1'000'000;
  std::int64_t eval_every = 10'000;
  std::uint64_t seed = 0;
  // Episode cap; truncation bootstraps rather than counting as terminal.
  int horizon = gold::kDefaultHorizon;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct CurvePoint {
  std::int64_t step = 0;
  double ret = 0.0;
  double ret_discounted = 0.0;
};

using LearningCurve = std::vector<CurvePoint>;

// One Gold Mining episode wired to a method: ground-truth environment and RM
// state, the agent's history, its inference state and its dig memory.
class GoldEpisode {
 public:
  struct Outcome {
    double reward;   // RM reward plus movement penalty
    bool terminal;   // true RM state entered F
    bool truncated;  // horizon reached without terminating
  };

  // rm must outlive the episode.
  GoldEpisode(const RewardMachine& rm, Method method, int horizon);

  void reset();
  Outcome step(gold::Action a);
  [[nodiscard]] QInput input() const;

  [[nodiscard]] gold::Position position() const { return env_.position(); }
  [[nodiscard]] RmStateId true_rm_state() const { return rm_state_; }
  [[nodiscard]] const MemoryFlags& memory() const { return memory_; }
  [[nodiscard]] const History& history() const { return history_; }
  // Present for naive/ibu/tdm.
  [[nodiscard]] const InferenceState* inference() const { return inference_ ? &*inference_ : nullptr; }

 private:
  const RewardMachine& rm_;
  Method method_;
  gold::GoldMiningEnv env_;
  LabellingFunction label_;
  RmStateId rm_state_;
  History history_;
  MemoryFlags memory_;
  std::optional<InferenceState> inference_;
};

// Zero-initialised Q for the method's parameterisation.
LinearQ make_q(Method m, const RewardMachine& rm);

struct EvalResult {
  double ret = 0.0;
  double ret_discounted = 0.0;
  std::vector<gold::Action> actions;
  std::vector<gold::Position> positions;  // includes the start cell
  bool terminated = false;
};

// One greedy episode, lowest-index tie-break: deterministic in q.
EvalResult evaluate_policy(const LinearQ& q, Method m, const RewardMachine& rm, int horizon, double discount);

struct TrainResult {
  LearningCurve curve;
  LinearQ q;
};

// Epsilon-greedy Q-learning with one update per environment step and a greedy
// evaluation every eval_every steps.
TrainResult train_run(Method m, const TrainConfig& cfg);

// Mean return over the last n points of a curve.
double final_return(const LearningCurve& curve, std::size_t n = 10);

}  // namespace noisy_rm
