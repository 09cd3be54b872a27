#include "noisy_rm/gold_mining.hpp"

#include <algorithm>
#include <stdexcept>

#include "noisy_rm/inference.hpp"

namespace noisy_rm::gold {

namespace {

constexpr std::string_view kRmText = R"(rm
# Gold Mining: dig up gold, then bring it to the depot.
aps: gold home
states: u0 u1
terminals: u2
init: u0
u0 -> u1 : gold & !home , 0
u0 -> u2 : home , 0
u1 -> u2 : home , 1
)";

bool is_move(Action a) { return a != Action::kDig; }

struct PropIndices {
  int gold;
  int home;
};

PropIndices indices(const RewardMachine& rm) {
  auto g = rm.find_ap("gold");
  auto h = rm.find_ap("home");
  if (!g || !h) throw std::invalid_argument("Gold Mining needs propositions 'gold' and 'home'");
  return {*g, *h};
}

Position cell(Token t) {
  if (t < 0 || t >= kNumCells) throw std::out_of_range("Gold Mining observation out of range");
  return from_index(static_cast<int>(t));
}

// Home is read off the arrival cell; the agent identifies it perfectly.
PropSet home_part(const PropIndices& idx, Position arrived) {
  return arrived == kDepot ? PropSet{}.with(idx.home) : PropSet{};
}

}  // namespace

std::string_view to_string(Action a) {
  switch (a) {
    case Action::kUp: return "up";
    case Action::kDown: return "down";
    case Action::kLeft: return "left";
    case Action::kRight: return "right";
    case Action::kDig: return "dig";
  }
  return "?";
}

double gold_belief(Position p) {
  if (p.col == 3) return 0.8;
  if (p == Position{1, 2}) return 0.3;
  if (p == Position{1, 1}) return 0.6;
  return 0.0;
}

int memory_slot(Position p) {
  for (std::size_t i = 0; i < kMemoryCells.size(); ++i) {
    if (kMemoryCells[i] == p) return static_cast<int>(i);
  }
  return -1;
}

Position move(Position p, Action a) {
  switch (a) {
    case Action::kUp: p.row = std::min(p.row + 1, kHeight - 1); break;
    case Action::kDown: p.row = std::max(p.row - 1, 0); break;
    case Action::kLeft: p.col = std::max(p.col - 1, 0); break;
    case Action::kRight: p.col = std::min(p.col + 1, kWidth - 1); break;
    case Action::kDig: break;
  }
  return p;
}

GoldMiningEnv::GoldMiningEnv(int horizon) : horizon_(horizon) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
}

Position GoldMiningEnv::reset() {
  pos_ = kStart;
  steps_ = 0;
  return pos_;
}

StepResult GoldMiningEnv::step(Action a) {
  pos_ = move(pos_, a);
  ++steps_;
  return {pos_, is_move(a) ? -kMovePenalty : 0.0, steps_ >= horizon_};
}

std::string_view rm_text() { return kRmText; }

RewardMachine reward_machine() { return load_rm(kRmText); }

Pomdp as_pomdp() {
  Pomdp p = Pomdp::fully_observable(kNumCells, kNumActions);
  for (int s = 0; s < kNumCells; ++s) {
    for (int a = 0; a < kNumActions; ++a) {
      const auto act = static_cast<Action>(a);
      const int next = to_index(move(from_index(s), act));
      const auto su = static_cast<std::size_t>(s);
      const auto au = static_cast<std::size_t>(a);
      const auto nu = static_cast<std::size_t>(next);
      p.set_transition(su, au, nu, 1.0);
      p.set_reward(su, au, nu, is_move(act) ? -kMovePenalty : 0.0);
    }
  }
  p.set_initial(static_cast<std::size_t>(to_index(kStart)), 1.0);
  p.validate();
  return p;
}

LabellingFunction labelling(const RewardMachine& rm) {
  const PropIndices idx = indices(rm);
  return LabellingFunction([idx](Token s, Token a, Token next) {
    PropSet sigma = home_part(idx, cell(next));
    if (static_cast<Action>(a) == Action::kDig && yields_gold(cell(s))) sigma = sigma.with(idx.gold);
    return sigma;
  });
}

ToyModels toy_models(const RewardMachine& rm) {
  const PropIndices idx = indices(rm);
  const int n_aps = rm.num_aps();

  PropClassifier naive{[idx](const History& h) {
    const std::size_t t = h.length();
    if (t < 2) return PropSet{};
    const Position arrived = cell(h.observation(t));
    PropSet sigma = home_part(idx, arrived);
    if (static_cast<Action>(h.action(t - 1)) == Action::kDig && gold_belief(cell(h.observation(t - 1))) >= 0.5) {
      sigma = sigma.with(idx.gold);
    }
    return sigma;
  }};

  PropDistribution ibu{[idx, n_aps](const History& h) {
    const std::size_t t = h.length();
    if (t < 2) return point_mass(n_aps, PropSet{});
    const PropSet base = home_part(idx, cell(h.observation(t)));
    PropDist m = point_mass(n_aps, base);
    if (static_cast<Action>(h.action(t - 1)) == Action::kDig) {
      const double p = gold_belief(cell(h.observation(t - 1)));
      m[base.index()] = 1.0 - p;
      m[base.with(idx.gold).index()] += p;
    }
    return m;
  }};

  RmBeliefModel tdm{[&rm, idx, n_aps](const History& h) {
    Belief b = init_belief(rm);
    std::array<bool, kNumCells> dug{};
    for (std::size_t t = 2; t <= h.length(); ++t) {
      const Position from = cell(h.observation(t - 1));
      const PropSet base = home_part(idx, cell(h.observation(t)));
      PropDist m = point_mass(n_aps, base);
      if (static_cast<Action>(h.action(t - 1)) == Action::kDig && !dug[static_cast<std::size_t>(to_index(from))]) {
        dug[static_cast<std::size_t>(to_index(from))] = true;
        const double p = gold_belief(from);
        m[base.index()] = 1.0 - p;
        m[base.with(idx.gold).index()] += p;
      }
      b = ibu_update(rm, b, m);
    }
    return b;
  }};

  return {std::move(naive), std::move(ibu), std::move(tdm)};
}

}  // namespace noisy_rm::gold
