#pragma once

#include <string_view>

#include "noisy_rm/abstraction.hpp"
#include "noisy_rm/pomdp.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace noisy_rm::persistent {

// Two hidden states s0, s1 drawn uniformly and never changing; actions a0, a1.
// Taking a_i in s_i pays 1 (environment reward).
//   kUninformative: one observation o, always.
//   kRevealing: o with prob 0.5, otherwise o_i naming the state.
enum class Variant { kUninformative, kRevealing };

inline constexpr std::size_t kObsBlank = 0;  // o
inline constexpr std::size_t kObsS0 = 1;     // o^(0), revealing variant only
inline constexpr std::size_t kObsS1 = 2;     // o^(1), revealing variant only

Pomdp make_persistent(Variant variant);

// u0 -> u1 when A holds; neither state is terminal.
std::string_view rm_text();
RewardMachine reward_machine();

// A holds for (s, a, s') iff s = s0.
LabellingFunction labelling(const RewardMachine& rm);

}  // namespace noisy_rm::persistent
