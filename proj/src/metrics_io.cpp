#include "noisy_rm/metrics_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace noisy_rm {

double rm_loglik(const Belief& belief, RmStateId true_state) {
  const double p = belief[true_state];
  if (p <= 0.0) return kLogLikFloor;
  return std::max(std::log(p), kLogLikFloor);
}

double BeliefAccuracyReport::add(const std::string& method, const Belief& belief, RmStateId true_state) {
  Row* row = nullptr;
  for (auto& r : rows_) {
    if (r.method == method) row = &r;
  }
  if (row == nullptr) row = &rows_.emplace_back(Row{method});
  const double ll = rm_loglik(belief, true_state);
  const double p = belief[true_state];
  row->sum_loglik += ll;
  ++row->n_predictions;
  if (p <= 0.0 || std::log(p) < kLogLikFloor) ++row->n_floored;
  return ll;
}

const BeliefAccuracyReport::Row* BeliefAccuracyReport::find(const std::string& method) const {
  for (const auto& r : rows_) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

std::string format_decimal(double x) {
  if (x == 0.0) x = 0.0;  // fold -0 into 0
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "step,return,return_discounted\n";
  for (const auto& p : curve) {
    out << p.step << ',' << format_decimal(p.ret) << ',' << format_decimal(p.ret_discounted) << '\n';
  }
  finish(out, path);
}

void write_report(const BeliefAccuracyReport& report, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "method,mean_loglik,n_predictions,n_floored\n";
  for (const auto& r : report.rows()) {
    out << r.method << ',' << format_decimal(r.mean()) << ',' << r.n_predictions << ',' << r.n_floored << '\n';
  }
  finish(out, path);
}

void write_belief_csv(const std::vector<std::string>& state_names, const std::vector<BeliefRow>& rows,
                      const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "t,method";
  for (const auto& n : state_names) out << ',' << n;
  out << ",loglik\n";
  for (const auto& r : rows) {
    if (r.belief.size() != state_names.size()) throw std::invalid_argument("belief row width mismatch");
    out << r.t << ',' << r.method;
    for (double p : r.belief) out << ',' << format_decimal(p);
    out << ',' << format_decimal(r.loglik) << '\n';
  }
  finish(out, path);
}

std::string curve_file_name(const std::string& env, const std::string& method, std::uint64_t seed) {
  return env + "_" + method + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace noisy_rm
