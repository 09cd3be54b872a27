#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "noisy_rm/experiment.hpp"
#include "noisy_rm/metrics_io.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace noisy_rm {

inline constexpr std::string_view kVersion = "0.1.0";

// Names of environments the drivers know about.
bool is_known_env(std::string_view env);

// A batch of learning runs: every (method, seed) pair.
//
// JSON schema (all keys optional except where noted):
//   env           string, "gold"
//   methods       array of "oracle" | "memory" | "naive" | "ibu" | "tdm"   (required)
//   seeds         array of non-negative integers                          (required)
//   learning_rate, discount, epsilon   numbers
//   total_steps, eval_every, horizon   integers
//   out_dir       string
//   jobs          integer worker count
// A run manifest is itself a valid config; its extra "version" and "outputs"
// keys are ignored on input.
struct ExperimentConfig {
  std::string env = "gold";
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  TrainConfig train;
  std::filesystem::path out_dir = ".";
  int jobs = 1;

  // Throws std::invalid_argument on unknown env, empty method/seed lists or bad
  // hyper-parameters.
  void validate() const;

  static ExperimentConfig from_json_text(std::string_view text);
  [[nodiscard]] std::string to_json_text() const;
};

struct RunOutput {
  Method method;
  std::uint64_t seed;
  LearningCurve curve;
  std::filesystem::path file;
};

// Calls fn(i) for i in [0, n) on at most `jobs` threads.
void run_parallel(int jobs, std::size_t n, const std::function<void(std::size_t)>& fn);

// Runs the batch, writes one curve CSV per run plus manifest.json into
// out_dir. Validates before creating any file.
std::vector<RunOutput> run_experiments(const ExperimentConfig& cfg);

// Random-action rollouts scored by one or more belief methods
// ("naive", "ibu", "tdm" or "exact"). Every method sees the same episodes.
struct InferenceRun {
  std::vector<std::string> state_names;
  std::vector<BeliefRow> rows;
  BeliefAccuracyReport report;
};

InferenceRun run_belief_inference(const RewardMachine& rm, std::string_view env,
                                  const std::vector<std::string>& methods, std::uint64_t seed, int episodes,
                                  int horizon);

}  // namespace noisy_rm
