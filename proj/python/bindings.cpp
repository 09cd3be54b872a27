#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <variant>
#include <vector>

#include "noisy_rm/driver.hpp"
#include "noisy_rm/experiment.hpp"
#include "noisy_rm/gold_mining.hpp"
#include "noisy_rm/inference.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace py = pybind11;
using namespace noisy_rm;

namespace {

using StateArg = std::variant<std::uint32_t, std::string>;
using PropsArg = std::variant<std::uint32_t, std::vector<std::string>>;

RmStateId to_state(const RewardMachine& rm, const StateArg& u) {
  if (const auto* name = std::get_if<std::string>(&u)) {
    const auto id = rm.find_state(*name);
    if (!id) throw py::key_error("unknown state '" + *name + "'");
    return *id;
  }
  const auto index = std::get<std::uint32_t>(u);
  if (index >= rm.size()) throw py::index_error("state index out of range");
  return RmStateId{index};
}

PropSet to_props(const RewardMachine& rm, const PropsArg& sigma) {
  if (const auto* bits = std::get_if<std::uint32_t>(&sigma)) return PropSet{*bits};
  PropSet out;
  for (const auto& name : std::get<std::vector<std::string>>(sigma)) {
    const auto ap = rm.find_ap(name);
    if (!ap) throw py::key_error("unknown proposition '" + name + "'");
    out = out.with(*ap);
  }
  return out;
}

std::vector<std::string> state_names(const RewardMachine& rm) {
  std::vector<std::string> out;
  for (std::uint32_t i = 0; i < rm.size(); ++i) out.push_back(rm.name(RmStateId{i}));
  return out;
}

Method to_method(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw py::value_error("unknown method '" + name + "'");
  return *m;
}

py::list curve_to_list(const LearningCurve& curve) {
  py::list out;
  for (const auto& p : curve) out.append(py::make_tuple(p.step, p.ret, p.ret_discounted));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reward machines with noisy symbol grounding";

  auto rm_error = py::register_exception<RmError>(m, "RmError", PyExc_ValueError);
  py::register_exception<RmParseError>(m, "RmParseError", rm_error.ptr());
  py::register_exception<RmValidationError>(m, "RmValidationError", rm_error.ptr());

  py::class_<RewardMachine>(m, "RewardMachine")
      .def_property_readonly("aps", &RewardMachine::aps)
      .def_property_readonly("num_states", &RewardMachine::num_states)
      .def_property_readonly("num_terminals", &RewardMachine::num_terminals)
      .def_property_readonly("size", &RewardMachine::size)
      .def_property_readonly("initial", [](const RewardMachine& rm) { return rm.initial().index; })
      .def_property_readonly("state_names", &state_names)
      .def("is_terminal", [](const RewardMachine& rm, const StateArg& u) { return rm.is_terminal(to_state(rm, u)); })
      .def("state_index", [](const RewardMachine& rm, const StateArg& u) { return to_state(rm, u).index; })
      .def(
          "step",
          [](const RewardMachine& rm, const StateArg& u, const PropsArg& sigma) {
            try {
              const auto out = rm.step(to_state(rm, u), to_props(rm, sigma));
              return py::make_tuple(out.next.index, out.reward);
            } catch (const std::invalid_argument& e) {
              throw py::value_error(e.what());
            }
          },
          py::arg("u"), py::arg("sigma"),
          "Joint transition and reward. sigma is a list of proposition names or a bitmask.")
      .def("to_text", &to_rm_text)
      .def("__len__", &RewardMachine::size);

  m.def("load_rm", &load_rm, py::arg("text"), "Parse and validate reward machine text.");
  m.def("load_rm_file", &load_rm_file, py::arg("path"));

  m.def(
      "naive_update",
      [](const RewardMachine& rm, const StateArg& u, const PropsArg& sigma) {
        return naive_update(rm, to_state(rm, u), to_props(rm, sigma)).index;
      },
      py::arg("rm"), py::arg("u"), py::arg("sigma"));
  m.def(
      "ibu_update",
      [](const RewardMachine& rm, std::vector<double> prior, const std::vector<double>& m) {
        try {
          const Belief post = ibu_update(rm, Belief(std::move(prior)), m);
          return std::vector<double>(post.probs().begin(), post.probs().end());
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        }
      },
      py::arg("rm"), py::arg("prior"), py::arg("m"),
      "One independent belief update. m holds a probability per assignment, indexed by bitmask.");

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("discount", &TrainConfig::discount)
      .def_readwrite("epsilon", &TrainConfig::epsilon)
      .def_readwrite("total_steps", &TrainConfig::total_steps)
      .def_readwrite("eval_every", &TrainConfig::eval_every)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("horizon", &TrainConfig::horizon);

  m.def(
      "train_run",
      [](const std::string& method, const TrainConfig& cfg) {
        const Method m = to_method(method);
        try {
          cfg.validate();
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        }
        LearningCurve curve;
        {
          py::gil_scoped_release release;
          curve = train_run(m, cfg).curve;
        }
        return curve_to_list(curve);
      },
      py::arg("method"), py::arg("config"),
      "Train on Gold Mining; returns (step, return, discounted return) per evaluation.");
  m.def(
      "final_return",
      [](const std::vector<std::tuple<std::int64_t, double, double>>& points, std::size_t n) {
        LearningCurve curve;
        for (const auto& [s, r, d] : points) curve.push_back({s, r, d});
        return final_return(curve, n);
      },
      py::arg("curve"), py::arg("n") = 10);

  m.def(
      "run_experiments",
      [](const std::string& config_json) {
        ExperimentConfig cfg;
        try {
          cfg = ExperimentConfig::from_json_text(config_json);
          cfg.validate();
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        }
        std::vector<RunOutput> runs;
        {
          py::gil_scoped_release release;
          runs = run_experiments(cfg);
        }
        std::vector<std::filesystem::path> files;
        for (const auto& r : runs) files.push_back(r.file);
        return files;
      },
      py::arg("config_json"), "Run every (method, seed) pair of a JSON config; returns the CSV paths.");

  m.def(
      "run_belief_inference",
      [](const RewardMachine& rm, const std::string& env, const std::vector<std::string>& methods,
         std::uint64_t seed, int episodes, int horizon) {
        InferenceRun run;
        try {
          run = run_belief_inference(rm, env, methods, seed, episodes, horizon);
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        }
        py::list rows;
        for (const auto& r : run.rows) rows.append(py::make_tuple(r.t, r.method, r.belief, r.loglik));
        py::dict report;
        for (const auto& r : run.report.rows()) report[py::str(r.method)] = r.mean();
        py::dict out;
        out["state_names"] = run.state_names;
        out["rows"] = rows;
        out["mean_loglik"] = report;
        return out;
      },
      py::arg("rm"), py::arg("env") = "gold", py::arg("methods") = std::vector<std::string>{"naive", "ibu", "tdm"},
      py::arg("seed") = 0, py::arg("episodes") = 200, py::arg("horizon") = gold::kDefaultHorizon);

  auto g = m.def_submodule("gold", "Gold Mining environment");
  g.def("reward_machine", &gold::reward_machine);
  g.def("rm_text", [] { return std::string(gold::rm_text()); });
  g.def("gold_belief", [](int col, int row) { return gold::gold_belief({col, row}); });
  py::enum_<gold::Action>(g, "Action")
      .value("UP", gold::Action::kUp)
      .value("DOWN", gold::Action::kDown)
      .value("LEFT", gold::Action::kLeft)
      .value("RIGHT", gold::Action::kRight)
      .value("DIG", gold::Action::kDig);
  py::class_<gold::GoldMiningEnv>(g, "Env")
      .def(py::init<int>(), py::arg("horizon") = gold::kDefaultHorizon)
      .def("reset",
           [](gold::GoldMiningEnv& env) {
             const auto p = env.reset();
             return py::make_tuple(p.col, p.row);
           })
      .def("step",
           [](gold::GoldMiningEnv& env, gold::Action a) {
             const auto r = env.step(a);
             return py::make_tuple(py::make_tuple(r.position.col, r.position.row), r.reward, r.truncated);
           })
      .def_property_readonly("steps", &gold::GoldMiningEnv::steps)
      .def_property_readonly("horizon", &gold::GoldMiningEnv::horizon);
}
