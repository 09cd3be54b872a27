#include "noisy_rm/persistent.hpp"

#include <stdexcept>

namespace noisy_rm::persistent {

namespace {
constexpr std::string_view kRmText = R"(rm
aps: A
states: u0 u1
terminals:
init: u0
u0 -> u1 : A , 0
)";
}  // namespace

Pomdp make_persistent(Variant variant) {
  const bool revealing = variant == Variant::kRevealing;
  Pomdp p(2, 2, revealing ? 3 : 1);
  for (std::size_t s = 0; s < 2; ++s) {
    p.set_initial(s, 0.5);
    for (std::size_t a = 0; a < 2; ++a) {
      p.set_transition(s, a, s, 1.0);
      p.set_reward(s, a, s, a == s ? 1.0 : 0.0);
    }
    if (revealing) {
      p.set_observation(s, kObsBlank, 0.5);
      p.set_observation(s, s == 0 ? kObsS0 : kObsS1, 0.5);
    } else {
      p.set_observation(s, kObsBlank, 1.0);
    }
  }
  p.validate();
  return p;
}

std::string_view rm_text() { return kRmText; }

RewardMachine reward_machine() { return load_rm(kRmText); }

LabellingFunction labelling(const RewardMachine& rm) {
  auto a = rm.find_ap("A");
  if (!a) throw std::invalid_argument("persistent POMDP needs proposition 'A'");
  const int idx = *a;
  return LabellingFunction([idx](Token s, Token, Token) { return s == 0 ? PropSet{}.with(idx) : PropSet{}; });
}

}  // namespace noisy_rm::persistent
