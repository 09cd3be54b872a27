// Consistency of the three inference methods (Table 1): exact models in an
// MDP, the two persistent-state counterexamples, and TDM fed by the filter.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "noisy_rm/abstraction.hpp"
#include "noisy_rm/gold_mining.hpp"
#include "noisy_rm/inference.hpp"
#include "noisy_rm/persistent.hpp"
#include "noisy_rm/product.hpp"

using namespace noisy_rm;

namespace {

// Pr(u_t | h_t) by forward filtering the whole history.
Belief filter_history(const ProductPomdp& prod, const History& h) {
  FilterResult f = exact_filter_init(prod, static_cast<std::size_t>(h.observation(1)));
  for (std::size_t t = 2; t <= h.length(); ++t) {
    f = exact_filter_step(prod, f.posterior, static_cast<std::size_t>(h.action(t - 1)),
                          static_cast<std::size_t>(h.observation(t)));
  }
  return f.rm_marginal;
}

struct Persistent {
  explicit Persistent(persistent::Variant v)
      : env(persistent::make_persistent(v)),
        rm(persistent::reward_machine()),
        label(persistent::labelling(rm)),
        product(build_product(env, rm, label)) {}
  Pomdp env;
  RewardMachine rm;
  LabellingFunction label;
  ProductPomdp product;
};

}  // namespace

TEST_CASE("exact models make naive and IBU consistent in an MDP") {
  const Pomdp env = gold::as_pomdp();
  const RewardMachine rm = gold::reward_machine();
  const LabellingFunction label = gold::labelling(rm);
  InferenceState naive(rm, exact_classifier(env, label));
  InferenceState ibu(rm, exact_prop_distribution(env, label, rm.num_aps()));
  InferenceState tdm(rm, exact_rm_belief(env, rm, label));
  Rng rng(31);
  for (int ep = 0; ep < 100; ++ep) {
    gold::GoldMiningEnv world;
    gold::Position p = world.reset();
    RmStateId u = rm.initial();
    History h(gold::to_index(p));
    naive.reset(h);
    ibu.reset(h);
    tdm.reset(h);
    while (!rm.is_terminal(u) && world.steps() < 200) {
      const auto a = static_cast<gold::Action>(rng.uniform_int(gold::kNumActions));
      const gold::Position from = p;
      p = world.step(a).position;
      u = rm.step(u, label(gold::to_index(from), static_cast<Token>(a), gold::to_index(p))).next;
      h.append(static_cast<Token>(a), gold::to_index(p));
      const Belief truth = Belief::dirac(rm.size(), u);
      REQUIRE(naive.update(h) == truth);
      REQUIRE(*naive.discrete_state() == u);
      REQUIRE(ibu.update(h) == truth);
      REQUIRE(tdm.update(h) == truth);
    }
  }
}

TEST_CASE("exact models refuse partially observable environments") {
  const Persistent w(persistent::Variant::kUninformative);
  CHECK_THROWS_AS((void)exact_classifier(w.env, w.label), std::invalid_argument);
  CHECK_THROWS_AS((void)exact_prop_distribution(w.env, w.label, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)exact_rm_belief(w.env, w.rm, w.label), std::invalid_argument);
}

TEST_CASE("naive cannot represent the uninformative persistent belief") {
  const Persistent w(persistent::Variant::kUninformative);
  const int horizon = 5;
  // Every history has the same observations; only the actions vary. Sweep all
  // action sequences and all classifier output sequences.
  for (std::uint32_t actions = 0; actions < (1U << (horizon - 1)); ++actions) {
    History h(persistent::kObsBlank);
    for (int t = 0; t + 1 < horizon; ++t) h.append((actions >> t) & 1U, persistent::kObsBlank);
    for (std::uint32_t outputs = 0; outputs < (1U << (horizon - 1)); ++outputs) {
      PropClassifier model{[outputs](const History& hh) {
        return ((outputs >> (hh.length() - 2)) & 1U) ? PropSet{1} : PropSet{};
      }};
      InferenceState naive(w.rm, model);
      History prefix(h.observation(1));
      naive.reset(prefix);
      for (std::size_t t = 2; t <= h.length(); ++t) {
        prefix.append(h.action(t - 1), h.observation(t));
        const Belief b = naive.update(prefix);
        const Belief exact = filter_history(w.product, prefix);
        REQUIRE(exact[RmStateId{1}] == doctest::Approx(0.5).epsilon(1e-15));
        REQUIRE(b.is_dirac());
        REQUIRE(total_variation(b.probs(), exact.probs()) >= 0.5 - 1e-12);
      }
    }
  }
}

TEST_CASE("IBU cannot undo belief in the absorbing persistent state") {
  const Persistent w(persistent::Variant::kRevealing);
  const RmStateId u1{1};
  History h(persistent::kObsBlank);
  h.append(0, persistent::kObsBlank);
  const Belief exact2 = filter_history(w.product, h);
  CHECK(exact2[u1] == doctest::Approx(0.5));
  h.append(0, persistent::kObsS1);
  CHECK(filter_history(w.product, h)[u1] == 0.0);

  // The best IBU can do at t = 2 is match the exact 0.5; after that no
  // transition leaves u1, so ũ3[u1] >= 0.5 whatever the model says next.
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const double p3 = rng.uniform();
    PropDistribution model{[p3](const History& hh) {
      const double p = hh.length() == 2 ? 0.5 : p3;
      return PropDist{1.0 - p, p};
    }};
    InferenceState ibu(w.rm, model);
    History prefix(h.observation(1));
    ibu.reset(prefix);
    prefix.append(h.action(1), h.observation(2));
    REQUIRE(ibu.update(prefix)[u1] == doctest::Approx(0.5));
    prefix.append(h.action(2), h.observation(3));
    REQUIRE(ibu.update(prefix)[u1] >= 0.5);
  }
}

TEST_CASE("TDM fed by the exact filter equals the filter") {
  for (auto variant : {persistent::Variant::kUninformative, persistent::Variant::kRevealing}) {
    const Persistent w(variant);
    RmBeliefModel model{[&w](const History& h) { return filter_history(w.product, h); }};
    Rng rng(5);
    for (int ep = 0; ep < 100; ++ep) {
      NoisyRmExecution exec(w.env, w.rm, w.label);
      History h(static_cast<Token>(exec.reset(rng)));
      InferenceState tdm(w.rm, model);
      REQUIRE(tdm.reset(h) == filter_history(w.product, h));
      for (int t = 0; t < 6; ++t) {
        const std::size_t a = rng.uniform_int(2);
        h.append(static_cast<Token>(a), static_cast<Token>(exec.step(a, rng).observation));
        REQUIRE(tdm.update(h) == filter_history(w.product, h));
      }
    }
  }
}

TEST_CASE("the RM state carries information no history-based policy has") {
  // Uninformative persistent POMDP: every history looks the same, so any
  // policy on histories is open loop and earns 0.5 per step in expectation.
  // A policy that also sees u_t knows s from t = 2 on and earns 1 there.
  const Persistent w(persistent::Variant::kUninformative);
  const int horizon = 6;
  double best_open_loop = 0.0;
  for (std::uint32_t plan = 0; plan < (1U << horizon); ++plan) {
    double expected = 0.0;
    for (std::size_t s = 0; s < 2; ++s) {
      for (int t = 0; t < horizon; ++t) expected += 0.5 * w.env.reward(s, (plan >> t) & 1U, s);
    }
    best_open_loop = std::max(best_open_loop, expected);
  }
  CHECK(best_open_loop == doctest::Approx(0.5 * horizon));

  double with_rm = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    RmStateId u = w.rm.initial();
    for (int t = 0; t < horizon; ++t) {
      // At t = 1 u is uninformative; afterwards u1 iff s = s0.
      const std::size_t a = t == 0 ? 0 : (u == RmStateId{1} ? 0 : 1);
      with_rm += 0.5 * w.env.reward(s, a, s);
      u = w.rm.step(u, w.label(static_cast<Token>(s), static_cast<Token>(a), static_cast<Token>(s))).next;
    }
  }
  CHECK(with_rm == doctest::Approx(0.5 + (horizon - 1)));
}
