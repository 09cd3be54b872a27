// Command-line driver: learning runs, RM validation and belief inference.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "noisy_rm/driver.hpp"
#include "noisy_rm/metrics_io.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace {

using namespace noisy_rm;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path default_out_dir() {
  const char* env = std::getenv("NOISY_RM_OUT");
  return env != nullptr && *env != '\0' ? std::filesystem::path(env) : std::filesystem::path(".");
}

// Accepts both repeated flags and comma-separated lists.
std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

struct RunArgs {
  std::string config;
  std::string env;
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::int64_t steps = -1;
  std::int64_t eval_every = -1;
  int horizon = -1;
  int jobs = -1;
  double learning_rate = -1.0;
  double discount = -1.0;
  double epsilon = -1.0;
};

int cmd_run(const RunArgs& args) {
  ExperimentConfig cfg;
  bool out_from_config = false;
  if (!args.config.empty()) {
    const std::string text = read_file(args.config);
    cfg = ExperimentConfig::from_json_text(text);
    out_from_config = nlohmann::json::parse(text).contains("out_dir");
  } else {
    cfg.seeds = {0};
  }
  if (!args.env.empty()) cfg.env = args.env;
  if (!args.methods.empty()) {
    cfg.methods.clear();
    for (const auto& name : split_list(args.methods)) {
      auto m = parse_method(name);
      if (!m) throw std::invalid_argument("unknown method '" + name + "'");
      cfg.methods.push_back(*m);
    }
  }
  if (!args.seeds.empty()) cfg.seeds = args.seeds;
  if (!args.out.empty()) {
    cfg.out_dir = args.out;
  } else if (!out_from_config) {
    cfg.out_dir = default_out_dir();
  }
  if (args.steps >= 0) cfg.train.total_steps = args.steps;
  if (args.eval_every >= 0) cfg.train.eval_every = args.eval_every;
  if (args.horizon >= 0) cfg.train.horizon = args.horizon;
  if (args.jobs >= 0) cfg.jobs = args.jobs;
  if (args.learning_rate >= 0) cfg.train.learning_rate = args.learning_rate;
  if (args.discount >= 0) cfg.train.discount = args.discount;
  if (args.epsilon >= 0) cfg.train.epsilon = args.epsilon;

  const auto runs = run_experiments(cfg);
  for (const auto& r : runs) {
    std::printf("%-6s seed %-4llu final return %s  -> %s\n", std::string(to_string(r.method)).c_str(),
                static_cast<unsigned long long>(r.seed),
                r.curve.empty() ? "n/a" : format_decimal(final_return(r.curve)).c_str(), r.file.string().c_str());
  }
  std::printf("wrote %zu curve file(s) and %s\n", runs.size(), (cfg.out_dir / "manifest.json").string().c_str());
  return 0;
}

int cmd_validate(const std::string& path) {
  const std::string text = read_file(path);
  RewardMachine rm = [&] {
    try {
      return load_rm(text);
    } catch (const RmError& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }();
  std::string ap_list;
  for (const auto& a : rm.aps()) ap_list += (ap_list.empty() ? "" : ", ") + a;
  std::printf("%s: ok\n", path.c_str());
  std::printf("  aps: %d (%s)\n", rm.num_aps(), ap_list.c_str());
  std::printf("  states: %zu (%zu non-terminal, %zu terminal)\n", rm.size(), rm.num_states(), rm.num_terminals());
  std::printf("  initial: %s\n", rm.name(rm.initial()).c_str());
  std::printf("  edges: %zu declared, %zu default self-loops\n", rm.edges().size(), rm.default_edges().size());
  std::printf("  table: %zu states x %zu assignments = %zu entries\n", rm.num_states(), rm.num_assignments(),
              rm.table().size());
  return 0;
}

struct InferArgs {
  std::string rm_file;
  std::string env = "gold";
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  int episodes = 200;
  int horizon = gold::kDefaultHorizon;
  std::string out;
};

int cmd_infer(const InferArgs& args) {
  const RewardMachine rm = [&] {
    try {
      return load_rm(read_file(args.rm_file));
    } catch (const RmError& e) {
      throw std::runtime_error(args.rm_file + ": " + e.what());
    }
  }();
  std::vector<std::string> methods = split_list(args.methods);
  if (methods.empty()) methods = {"naive", "ibu", "tdm"};
  const InferenceRun run = run_belief_inference(rm, args.env, methods, args.seed, args.episodes, args.horizon);

  const std::filesystem::path out = args.out.empty() ? default_out_dir() : std::filesystem::path(args.out);
  std::filesystem::create_directories(out);
  const std::string stem = args.env + "_seed" + std::to_string(args.seed);
  const auto beliefs = out / (stem + "_beliefs.csv");
  const auto report = out / (stem + "_report.csv");
  write_belief_csv(run.state_names, run.rows, beliefs);
  write_report(run.report, report);

  std::printf("%-6s %12s %13s %9s\n", "method", "mean_loglik", "n_predictions", "n_floored");
  for (const auto& r : run.report.rows()) {
    std::printf("%-6s %12s %13lld %9lld\n", r.method.c_str(), format_decimal(r.mean()).c_str(),
                static_cast<long long>(r.n_predictions), static_cast<long long>(r.n_floored));
  }
  std::printf("wrote %s and %s\n", beliefs.string().c_str(), report.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward machine learning under noisy symbol grounding"};
  app.set_version_flag("--version", std::string(noisy_rm::kVersion));
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Train policies and write learning curves");
  run->add_option("--config", run_args.config, "JSON config file")->check(CLI::ExistingFile);
  run->add_option("--env", run_args.env, "Environment name (gold)");
  run->add_option("--method", run_args.methods, "oracle, memory, naive, ibu, tdm (repeat or comma-separate)");
  run->add_option("--seed", run_args.seeds, "Seed(s)");
  run->add_option("--out", run_args.out, "Output directory (default $NOISY_RM_OUT or .)");
  run->add_option("--steps", run_args.steps, "Training steps per run");
  run->add_option("--eval-every", run_args.eval_every, "Steps between greedy evaluations");
  run->add_option("--horizon", run_args.horizon, "Episode step cap");
  run->add_option("--jobs", run_args.jobs, "Parallel runs");
  run->add_option("--learning-rate", run_args.learning_rate, "Step size alpha");
  run->add_option("--discount", run_args.discount, "Discount gamma");
  run->add_option("--epsilon", run_args.epsilon, "Exploration rate");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Parse and validate a reward machine file");
  validate->add_option("file", validate_file, "Reward machine file")->required();

  InferArgs infer_args;
  auto* infer = app.add_subcommand("infer", "Score RM-state belief methods on random-action episodes");
  infer->add_option("rm_file", infer_args.rm_file, "Reward machine file")->required();
  infer->add_option("--env", infer_args.env, "Environment name (gold)");
  infer->add_option("--method", infer_args.methods, "naive, ibu, tdm, exact (repeat or comma-separate)");
  infer->add_option("--seed", infer_args.seed, "Seed for the episodes");
  infer->add_option("--episodes", infer_args.episodes, "Number of episodes");
  infer->add_option("--horizon", infer_args.horizon, "Episode step cap");
  infer->add_option("--out", infer_args.out, "Output directory (default $NOISY_RM_OUT or .)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args);
    if (*validate) return cmd_validate(validate_file);
    if (*infer) return cmd_infer(infer_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
