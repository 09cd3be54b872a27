#include "noisy_rm/driver.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "noisy_rm/gold_mining.hpp"
#include "noisy_rm/inference.hpp"
#include "noisy_rm/product.hpp"

namespace noisy_rm {

using nlohmann::json;

bool is_known_env(std::string_view env) { return env == "gold"; }

void ExperimentConfig::validate() const {
  if (!is_known_env(env)) throw std::invalid_argument("unknown environment '" + env + "'");
  if (methods.empty()) throw std::invalid_argument("no methods given");
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  if (jobs <= 0) throw std::invalid_argument("jobs must be positive");
  train.validate();
}

ExperimentConfig ExperimentConfig::from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  static const char* const kKnown[] = {"env",     "methods",    "seeds",   "learning_rate", "discount",
                                       "epsilon", "total_steps", "eval_every", "horizon",    "out_dir",
                                       "jobs",    "version",    "outputs"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : kKnown) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("env")) cfg.env = j.at("env").get<std::string>();
    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) {
        const auto name = m.get<std::string>();
        auto parsed = parse_method(name);
        if (!parsed) throw std::invalid_argument("unknown method '" + name + "'");
        cfg.methods.push_back(*parsed);
      }
    }
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("learning_rate")) cfg.train.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("discount")) cfg.train.discount = j.at("discount").get<double>();
    if (j.contains("epsilon")) cfg.train.epsilon = j.at("epsilon").get<double>();
    if (j.contains("total_steps")) cfg.train.total_steps = j.at("total_steps").get<std::int64_t>();
    if (j.contains("eval_every")) cfg.train.eval_every = j.at("eval_every").get<std::int64_t>();
    if (j.contains("horizon")) cfg.train.horizon = j.at("horizon").get<int>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["env"] = env;
  j["methods"] = json::array();
  for (Method m : methods) j["methods"].push_back(std::string(to_string(m)));
  j["seeds"] = seeds;
  j["learning_rate"] = train.learning_rate;
  j["discount"] = train.discount;
  j["epsilon"] = train.epsilon;
  j["total_steps"] = train.total_steps;
  j["eval_every"] = train.eval_every;
  j["horizon"] = train.horizon;
  j["out_dir"] = out_dir.string();
  j["jobs"] = jobs;
  return j.dump(2);
}

void run_parallel(int jobs, std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<RunOutput> run_experiments(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<RunOutput> runs;
  for (Method m : cfg.methods) {
    for (std::uint64_t seed : cfg.seeds) {
      runs.push_back({m, seed, {}, cfg.out_dir / curve_file_name(cfg.env, std::string(to_string(m)), seed)});
    }
  }
  run_parallel(cfg.jobs, runs.size(), [&](std::size_t i) {
    TrainConfig train = cfg.train;
    train.seed = runs[i].seed;
    runs[i].curve = train_run(runs[i].method, train).curve;
    write_curve_csv(runs[i].curve, runs[i].file);
  });

  json manifest = json::parse(cfg.to_json_text());
  manifest["version"] = std::string(kVersion);
  manifest["outputs"] = json::array();
  for (const auto& r : runs) manifest["outputs"].push_back(r.file.filename().string());
  const auto path = cfg.out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  return runs;
}

namespace {

struct Rollout {
  std::vector<gold::Action> actions;
  std::vector<gold::Position> positions;  // one more than actions
  std::vector<RmStateId> rm_states;       // u_t aligned with positions
};

Rollout random_rollout(const RewardMachine& rm, const LabellingFunction& label, Rng& rng, int horizon) {
  Rollout r;
  gold::GoldMiningEnv env(horizon);
  r.positions.push_back(env.reset());
  r.rm_states.push_back(rm.initial());
  while (true) {
    const auto a = static_cast<gold::Action>(rng.uniform_int(gold::kNumActions));
    const gold::Position from = env.position();
    const auto st = env.step(a);
    const RmStateId u =
        rm.step(r.rm_states.back(), label(gold::to_index(from), static_cast<Token>(a), gold::to_index(st.position)))
            .next;
    r.actions.push_back(a);
    r.positions.push_back(st.position);
    r.rm_states.push_back(u);
    if (rm.is_terminal(u) || st.truncated) break;
  }
  return r;
}

}  // namespace

InferenceRun run_belief_inference(const RewardMachine& rm, std::string_view env,
                                  const std::vector<std::string>& methods, std::uint64_t seed, int episodes,
                                  int horizon) {
  if (!is_known_env(env)) throw std::invalid_argument("unknown environment '" + std::string(env) + "'");
  if (episodes <= 0) throw std::invalid_argument("episodes must be positive");
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  for (const auto& m : methods) {
    if (m != "naive" && m != "ibu" && m != "tdm" && m != "exact") {
      throw std::invalid_argument("unknown inference method '" + m + "'");
    }
  }
  if (methods.empty()) throw std::invalid_argument("no inference methods given");

  const LabellingFunction label = gold::labelling(rm);
  const gold::ToyModels models = gold::toy_models(rm);
  const Pomdp env_pomdp = gold::as_pomdp();
  std::optional<ProductPomdp> product;

  InferenceRun run;
  for (std::size_t i = 0; i < rm.size(); ++i) run.state_names.push_back(rm.name(RmStateId{static_cast<std::uint32_t>(i)}));

  Rng rng(seed);
  std::vector<Rollout> rollouts;
  for (int e = 0; e < episodes; ++e) rollouts.push_back(random_rollout(rm, label, rng, horizon));

  for (const auto& method : methods) {
    if (method == "exact" && !product) product = build_product(env_pomdp, rm, label);
    for (const Rollout& r : rollouts) {
      auto record = [&](std::size_t t, const Belief& b) {
        const double ll = run.report.add(method, b, r.rm_states[t - 1]);
        run.rows.push_back({static_cast<std::int64_t>(t), method, {b.probs().begin(), b.probs().end()}, ll});
      };
      History h(gold::to_index(r.positions[0]));
      if (method == "exact") {
        FilterResult f = exact_filter_init(*product, static_cast<std::size_t>(gold::to_index(r.positions[0])));
        record(1, f.rm_marginal);
        for (std::size_t k = 0; k < r.actions.size(); ++k) {
          f = exact_filter_step(*product, f.posterior, static_cast<std::size_t>(r.actions[k]),
                                static_cast<std::size_t>(gold::to_index(r.positions[k + 1])));
          record(k + 2, f.rm_marginal);
        }
        continue;
      }
      AbstractionModel model = method == "naive" ? AbstractionModel(models.naive)
                               : method == "ibu" ? AbstractionModel(models.ibu)
                                                 : AbstractionModel(models.tdm);
      InferenceState state(rm, std::move(model));
      record(1, state.reset(h));
      for (std::size_t k = 0; k < r.actions.size(); ++k) {
        h.append(static_cast<Token>(r.actions[k]), gold::to_index(r.positions[k + 1]));
        record(k + 2, state.update(h));
      }
    }
  }
  return run;
}

}  // namespace noisy_rm
