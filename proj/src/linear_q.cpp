#include "noisy_rm/linear_q.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <utility>

namespace noisy_rm {

MemoryFlags::MemoryFlags(int count) : count_(count) {
  if (count < 0 || count > 32) throw std::invalid_argument("memory flag count out of range");
}

int MemoryFlags::num_set() const { return std::popcount(bits_); }

void MemoryFlags::set(int i) {
  if (i < 0 || i >= count_) throw std::out_of_range("memory flag index");
  bits_ |= 1U << i;
}

LinearQ::LinearQ(Parameterization kind, QDims dims) : kind_(kind), dims_(dims) {
  if (dims.locations <= 0 || dims.actions <= 0) throw std::invalid_argument("LinearQ needs locations and actions");
  const auto L = static_cast<std::size_t>(dims.locations);
  const auto A = static_cast<std::size_t>(dims.actions);
  const auto U = static_cast<std::size_t>(dims.rm_states);
  std::size_t n = 0;
  switch (kind) {
    case Parameterization::kOracle:
      if (dims.rm_states <= 0) throw std::invalid_argument("oracle Q needs RM states");
      n = L * U * A;
      break;
    case Parameterization::kMemoryOnly:
      if (dims.memory <= 0) throw std::invalid_argument("memory Q needs memory flags");
      n = L * A + L * 2 * A;
      break;
    case Parameterization::kBeliefConditioned:
      if (dims.rm_states <= 0 || dims.memory <= 0) {
        throw std::invalid_argument("belief-conditioned Q needs RM states and memory flags");
      }
      n = U + L * U * A + L * U * 2 * A;
      break;
  }
  weights_.assign(n, 0.0);
}

template <typename Fn>
void LinearQ::for_each_feature(const QInput& in, int action, Fn&& fn) const {
  const auto L = static_cast<std::size_t>(dims_.locations);
  const auto A = static_cast<std::size_t>(dims_.actions);
  const auto U = static_cast<std::size_t>(dims_.rm_states);
  if (in.location < 0 || in.location >= dims_.locations) throw std::invalid_argument("location out of range");
  if (action < 0 || action >= dims_.actions) throw std::invalid_argument("action out of range");
  const auto loc = static_cast<std::size_t>(in.location);
  const auto a = static_cast<std::size_t>(action);

  auto memory_fractions = [&]() {
    if (in.memory.size() != dims_.memory) throw std::invalid_argument("memory flag count mismatch");
    const double k = static_cast<double>(dims_.memory);
    const int on = in.memory.num_set();
    return std::pair{static_cast<double>(dims_.memory - on) / k, static_cast<double>(on) / k};
  };

  switch (kind_) {
    case Parameterization::kOracle: {
      const auto* u = std::get_if<RmStateId>(&in.task);
      if (u == nullptr) throw std::invalid_argument("oracle Q expects a discrete RM state");
      if (u->index >= U) throw std::invalid_argument("oracle Q queried at a terminal RM state");
      fn((loc * U + u->index) * A + a, 1.0);
      break;
    }
    case Parameterization::kMemoryOnly: {
      if (!std::holds_alternative<std::monostate>(in.task)) {
        throw std::invalid_argument("memory-only Q takes no RM input");
      }
      const auto [off, on] = memory_fractions();
      fn(loc * A + a, 1.0);
      const std::size_t q2 = L * A;
      if (off != 0.0) fn(q2 + (loc * 2 + 0) * A + a, off);
      if (on != 0.0) fn(q2 + (loc * 2 + 1) * A + a, on);
      break;
    }
    case Parameterization::kBeliefConditioned: {
      const auto* b = std::get_if<Belief>(&in.task);
      if (b == nullptr) throw std::invalid_argument("belief-conditioned Q expects a belief");
      if (b->size() < U) throw std::invalid_argument("belief smaller than RM state count");
      const auto [off, on] = memory_fractions();
      const std::size_t q2 = U;
      const std::size_t q3 = U + L * U * A;
      for (std::size_t u = 0; u < U; ++u) {
        const double w = b->probs()[u];
        if (w == 0.0) continue;
        fn(u, w);
        fn(q2 + (loc * U + u) * A + a, w);
        if (off != 0.0) fn(q3 + ((loc * U + u) * 2 + 0) * A + a, w * off);
        if (on != 0.0) fn(q3 + ((loc * U + u) * 2 + 1) * A + a, w * on);
      }
      break;
    }
  }
}

double LinearQ::value(const QInput& input, int action) const {
  double q = 0.0;
  for_each_feature(input, action, [&](std::size_t i, double x) { q += weights_[i] * x; });
  return q;
}

std::vector<Feature> LinearQ::gradient(const QInput& input, int action) const {
  std::vector<Feature> out;
  for_each_feature(input, action, [&](std::size_t i, double x) { out.push_back({i, x}); });
  return out;
}

double LinearQ::max_value(const QInput& input) const {
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < dims_.actions; ++a) best = std::max(best, value(input, a));
  return best;
}

double LinearQ::td_update(const Transition& tr, double alpha, double gamma) {
  const double target = tr.terminal ? tr.reward : tr.reward + gamma * max_value(tr.next);
  const double error = target - value(tr.input, tr.action);
  if (error != 0.0) {
    for_each_feature(tr.input, tr.action, [&](std::size_t i, double x) { weights_[i] += alpha * error * x; });
  }
  return error;
}

int select_action(const LinearQ& q, const QInput& input, double epsilon, Rng& rng, TieBreak ties) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
  const int n = q.dims().actions;
  if (epsilon > 0.0 && rng.uniform() < epsilon) return static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));

  double best = -std::numeric_limits<double>::infinity();
  int best_action = 0;
  int n_best = 0;
  // Reservoir over the maximisers keeps one pass and a uniform pick.
  for (int a = 0; a < n; ++a) {
    const double v = q.value(input, a);
    if (v > best) {
      best = v;
      best_action = a;
      n_best = 1;
    } else if (v == best) {
      ++n_best;
      if (ties == TieBreak::kRandom && rng.uniform_int(static_cast<std::uint64_t>(n_best)) == 0) best_action = a;
    }
  }
  return best_action;
}

}  // namespace noisy_rm
