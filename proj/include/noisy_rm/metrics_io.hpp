#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "noisy_rm/belief.hpp"
#include "noisy_rm/experiment.hpp"

namespace noisy_rm {

// ln(0.01): log-likelihoods are clamped here so Dirac mistakes stay finite.
inline const double kLogLikFloor = std::log(0.01);

// max(ln b[true_state], ln 0.01)
double rm_loglik(const Belief& belief, RmStateId true_state);

// Pools log-likelihoods over every (episode, step) prediction per method.
class BeliefAccuracyReport {
 public:
  struct Row {
    std::string method;
    double sum_loglik = 0.0;
    std::int64_t n_predictions = 0;
    std::int64_t n_floored = 0;
    [[nodiscard]] double mean() const { return n_predictions ? sum_loglik / static_cast<double>(n_predictions) : 0.0; }
  };

  // Returns the clamped log-likelihood that was recorded.
  double add(const std::string& method, const Belief& belief, RmStateId true_state);
  [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }
  [[nodiscard]] const Row* find(const std::string& method) const;

 private:
  std::vector<Row> rows_;
};

// 9 significant digits, "%.9g".
std::string format_decimal(double x);

// step,return,return_discounted
void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path);
// method,mean_loglik,n_predictions,n_floored
void write_report(const BeliefAccuracyReport& report, const std::filesystem::path& path);

// t,method,<state names...>,loglik
struct BeliefRow {
  std::int64_t t = 0;
  std::string method;
  std::vector<double> belief;
  double loglik = 0.0;
};
void write_belief_csv(const std::vector<std::string>& state_names, const std::vector<BeliefRow>& rows,
                      const std::filesystem::path& path);

// File name for one learning curve: <env>_<method>_seed<k>.csv
std::string curve_file_name(const std::string& env, const std::string& method, std::uint64_t seed);

}  // namespace noisy_rm
