#include <cmath>
#include <vector>

#include "doctest.h"
#include "noisy_rm/linear_q.hpp"

using namespace noisy_rm;

namespace {

constexpr QDims kDims{16, 2, 5, 6};

Belief random_belief(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  double z = 0.0;
  for (auto& x : p) z += x = rng.uniform() + 1e-3;
  for (auto& x : p) x /= z;
  return Belief(std::move(p));
}

MemoryFlags random_memory(Rng& rng) {
  MemoryFlags m(kDims.memory);
  for (int i = 0; i < kDims.memory; ++i) {
    if (rng.bernoulli(0.5)) m.set(i);
  }
  return m;
}

QInput random_input(Rng& rng, Parameterization kind) {
  QInput in;
  in.location = static_cast<int>(rng.uniform_int(kDims.locations));
  switch (kind) {
    case Parameterization::kOracle: in.task = RmStateId{static_cast<std::uint32_t>(rng.uniform_int(2))}; break;
    case Parameterization::kMemoryOnly: in.memory = random_memory(rng); break;
    case Parameterization::kBeliefConditioned:
      in.task = random_belief(rng, 3);
      in.memory = random_memory(rng);
      break;
  }
  return in;
}

void randomise(LinearQ& q, Rng& rng) {
  for (double& w : q.weights()) w = 2.0 * rng.uniform() - 1.0;
}

}  // namespace

TEST_CASE("weight counts per parameterisation") {
  CHECK(LinearQ(Parameterization::kOracle, kDims).weights().size() == 16 * 2 * 5);
  CHECK(LinearQ(Parameterization::kMemoryOnly, kDims).weights().size() == 16 * 5 + 16 * 2 * 5);
  CHECK(LinearQ(Parameterization::kBeliefConditioned, kDims).weights().size() == 2 + 16 * 2 * 5 + 16 * 2 * 2 * 5);
}

TEST_CASE("inputs must match the parameterisation") {
  const LinearQ oracle(Parameterization::kOracle, kDims);
  QInput in;
  in.task = Belief::dirac(3, RmStateId{0});
  CHECK_THROWS_AS((void)oracle.value(in, 0), std::invalid_argument);
  in.task = RmStateId{2};  // terminal
  CHECK_THROWS_AS((void)oracle.value(in, 0), std::invalid_argument);
  in.task = RmStateId{1};
  CHECK_THROWS_AS((void)oracle.value(in, 5), std::invalid_argument);
  in.location = 16;
  CHECK_THROWS_AS((void)oracle.value(in, 0), std::invalid_argument);

  const LinearQ mem(Parameterization::kMemoryOnly, kDims);
  QInput m;
  m.memory = MemoryFlags(3);
  CHECK_THROWS_AS((void)mem.value(m, 0), std::invalid_argument);
}

TEST_CASE("memory-only value follows the decomposition") {
  LinearQ q(Parameterization::kMemoryOnly, kDims);
  Rng rng(2);
  randomise(q, rng);
  QInput in;
  in.location = 7;
  in.memory = MemoryFlags(6);
  in.memory.set(1);
  in.memory.set(4);
  const auto w = q.weights();
  const std::size_t q2 = 16 * 5;
  for (int a = 0; a < 5; ++a) {
    const double q1 = w[7 * 5 + a];
    const double q2_off = w[q2 + (7 * 2 + 0) * 5 + a];
    const double q2_on = w[q2 + (7 * 2 + 1) * 5 + a];
    CHECK(q.value(in, a) == doctest::Approx(q1 + (4.0 * q2_off + 2.0 * q2_on) / 6.0).epsilon(1e-14));
  }
}

TEST_CASE("belief-conditioned value follows the decomposition") {
  LinearQ q(Parameterization::kBeliefConditioned, kDims);
  Rng rng(3);
  randomise(q, rng);
  QInput in;
  in.location = 9;
  in.task = Belief({0.2, 0.5, 0.3});
  in.memory = MemoryFlags(6);
  in.memory.set(0);
  const auto w = q.weights();
  const std::size_t q2 = 2, q3 = 2 + 16 * 2 * 5;
  for (int a = 0; a < 5; ++a) {
    double expected = 0.0;
    const double b[2] = {0.2, 0.5};
    for (std::size_t u = 0; u < 2; ++u) {
      const double q3_off = w[q3 + ((9 * 2 + u) * 2 + 0) * 5 + a];
      const double q3_on = w[q3 + ((9 * 2 + u) * 2 + 1) * 5 + a];
      expected += b[u] * (w[u] + w[q2 + (9 * 2 + u) * 5 + a] + (5.0 * q3_off + q3_on) / 6.0);
    }
    CHECK(q.value(in, a) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(12);
  const double h = 1e-6;
  for (auto kind : {Parameterization::kOracle, Parameterization::kMemoryOnly, Parameterization::kBeliefConditioned}) {
    for (int trial = 0; trial < 200; ++trial) {
      LinearQ q(kind, kDims);
      randomise(q, rng);
      const QInput in = random_input(rng, kind);
      const int a = static_cast<int>(rng.uniform_int(5));
      std::vector<double> analytic(q.weights().size(), 0.0);
      for (const Feature& f : q.gradient(in, a)) analytic[f.index] += f.value;
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double w0 = q.weights()[i];
        q.weights()[i] = w0 + h;
        const double up = q.value(in, a);
        q.weights()[i] = w0 - h;
        const double down = q.value(in, a);
        q.weights()[i] = w0;
        const double fd = (up - down) / (2.0 * h);
        const double scale = std::max(std::abs(analytic[i]), 1e-3);
        REQUIRE(std::abs(fd - analytic[i]) / scale <= 1e-6);
      }
    }
  }
}

TEST_CASE("gradient indices are unique") {
  Rng rng(4);
  LinearQ q(Parameterization::kBeliefConditioned, kDims);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = q.gradient(random_input(rng, Parameterization::kBeliefConditioned), 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) REQUIRE(g[i].index != g[j].index);
    }
  }
}

TEST_CASE("belief-conditioned Q is linear in the belief") {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    LinearQ q(Parameterization::kBeliefConditioned, kDims);
    randomise(q, rng);
    QInput in = random_input(rng, Parameterization::kBeliefConditioned);
    const Belief b = std::get<Belief>(in.task);
    const int a = static_cast<int>(rng.uniform_int(5));
    double mix = 0.0;
    for (std::uint32_t u = 0; u < 3; ++u) {
      QInput pure = in;
      pure.task = Belief::dirac(3, RmStateId{u});
      mix += b[RmStateId{u}] * q.value(pure, a);
    }
    REQUIRE(std::abs(q.value(in, a) - mix) <= 1e-12);
  }
}

TEST_CASE("terminal belief mass contributes nothing") {
  LinearQ q(Parameterization::kBeliefConditioned, kDims);
  Rng rng(1);
  randomise(q, rng);
  QInput in;
  in.location = 0;
  in.memory = MemoryFlags(6);
  in.task = Belief::dirac(3, RmStateId{2});
  for (int a = 0; a < 5; ++a) CHECK(q.value(in, a) == 0.0);
}

TEST_CASE("TD update moves Q toward the target") {
  LinearQ q(Parameterization::kOracle, kDims);
  QInput s;
  s.location = 3;
  s.task = RmStateId{0};
  QInput next = s;
  next.location = 4;
  q.weights()[(4 * 2 + 0) * 5 + 1] = 2.0;  // max over next actions is 2
  const double err = q.td_update({s, 0, 1.0, next, false}, 0.5, 0.9);
  CHECK(err == doctest::Approx(1.0 + 0.9 * 2.0));
  CHECK(q.value(s, 0) == doctest::Approx(0.5 * 2.8));
  const double err_terminal = q.td_update({s, 0, 1.0, next, true}, 0.5, 0.9);
  CHECK(err_terminal == doctest::Approx(1.0 - 1.4));
}

TEST_CASE("greedy selection and tie-breaking") {
  LinearQ q(Parameterization::kOracle, kDims);
  QInput in;
  in.location = 0;
  in.task = RmStateId{0};
  Rng rng(10);
  // All zero: evaluation picks the lowest index, training spreads evenly.
  CHECK(select_action(q, in, 0.0, rng, TieBreak::kLowestIndex) == 0);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[select_action(q, in, 0.0, rng, TieBreak::kRandom)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);

  q.weights()[3] = 1.0;
  CHECK(select_action(q, in, 0.0, rng, TieBreak::kLowestIndex) == 3);
  CHECK(select_action(q, in, 0.0, rng, TieBreak::kRandom) == 3);

  int greedy = 0;
  for (int i = 0; i < 50000; ++i) greedy += select_action(q, in, 0.2, rng, TieBreak::kRandom) == 3;
  CHECK(std::abs(greedy - 50000 * (0.8 + 0.2 / 5)) < 600);
}

TEST_CASE("memory flags") {
  MemoryFlags m(6);
  CHECK(m.num_set() == 0);
  m.set(5);
  m.set(5);
  m.set(0);
  CHECK(m.test(5));
  CHECK(m.num_set() == 2);
  CHECK_THROWS_AS(m.set(6), std::out_of_range);
  m.clear();
  CHECK(m == MemoryFlags(6));
}
