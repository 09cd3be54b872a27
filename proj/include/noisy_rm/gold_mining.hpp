#pragma once

#include <array>
#include <compare>
#include <string_view>

#include "noisy_rm/abstraction.hpp"
#include "noisy_rm/pomdp.hpp"
#include "noisy_rm/reward_machine.hpp"

namespace noisy_rm::gold {

// 4x4 grid, (col, row) with row 0 at the bottom. The robot starts top-left,
// the depot is bottom-left, column 3 yields gold, and (1,1), (1,2) hold pyrite.
inline constexpr int kWidth = 4;
inline constexpr int kHeight = 4;
inline constexpr int kNumCells = kWidth * kHeight;
inline constexpr double kMovePenalty = 0.02;
inline constexpr int kDefaultHorizon = 500;

enum class Action : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3, kDig = 4 };
inline constexpr int kNumActions = 5;

std::string_view to_string(Action a);

struct Position {
  int col = 0;
  int row = 0;
  friend constexpr auto operator<=>(Position, Position) = default;
};

inline constexpr Position kStart{0, 3};
inline constexpr Position kDepot{0, 0};

constexpr int to_index(Position p) { return p.row * kWidth + p.col; }
constexpr Position from_index(int i) { return {i % kWidth, i / kWidth}; }

// Ground truth: only column 3 yields gold.
constexpr bool yields_gold(Position p) { return p.col == 3; }

// The agent's prior that digging at p yields gold.
double gold_belief(Position p);

// Cells with nonzero gold belief, in memory-feature order: gold cells by
// row, then pyrite cells by row.
inline constexpr std::array<Position, 6> kMemoryCells{
    Position{3, 0}, Position{3, 1}, Position{3, 2}, Position{3, 3}, Position{1, 1}, Position{1, 2}};

// Index into kMemoryCells, or -1.
int memory_slot(Position p);

// Movement with border clamping; dig stays put.
Position move(Position p, Action a);

struct StepResult {
  Position position;
  double reward;   // -0.02 for any movement action (even into a wall), 0 for dig
  bool truncated;  // horizon reached
};

// Environment dynamics only; reward-machine reward is added by callers.
class GoldMiningEnv {
 public:
  explicit GoldMiningEnv(int horizon = kDefaultHorizon);

  Position reset();
  StepResult step(Action a);

  [[nodiscard]] Position position() const { return pos_; }
  [[nodiscard]] int steps() const { return steps_; }
  [[nodiscard]] int horizon() const { return horizon_; }

 private:
  int horizon_;
  Position pos_ = kStart;
  int steps_ = 0;
};

// Canonical Gold Mining reward machine document (same as data/gold.rm).
std::string_view rm_text();
RewardMachine reward_machine();

// Fully observable POMDP view: states and observations are cell indices,
// reward is the movement penalty, start is deterministic.
Pomdp as_pomdp();

// gold iff the source cell is in column 3 and the action is dig;
// home iff the destination is the depot. Looks proposition indices up in rm.
LabellingFunction labelling(const RewardMachine& rm);

// Toy abstraction models over histories whose tokens are cell indices and
// action indices.
//  - naive: gold iff digging at a cell believed >= 0.5; home exact.
//  - ibu:   Pr({gold}) = cell belief on digs; home exact.
//  - tdm:   IBU recursion that applies the gold update only on the first dig at
//           each cell. Keeps a reference to rm, which must outlive it.
struct ToyModels {
  PropClassifier naive;
  PropDistribution ibu;
  RmBeliefModel tdm;
};
ToyModels toy_models(const RewardMachine& rm);

}  // namespace noisy_rm::gold
