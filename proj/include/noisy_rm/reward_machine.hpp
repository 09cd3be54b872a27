#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noisy_rm/guard.hpp"
#include "noisy_rm/prop_set.hpp"

namespace noisy_rm {

struct SourcePos {
  int line = 0;
  int column = 0;
};

// Index into U followed by F: ids [0, |U|) are non-terminal, [|U|, |U|+|F|) terminal.
struct RmStateId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(RmStateId, RmStateId) = default;
};

class RmError : public std::runtime_error {
 public:
  RmError(const std::string& what, SourcePos pos) : std::runtime_error(what), pos_(pos) {}
  [[nodiscard]] SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class RmParseError : public RmError {
 public:
  using RmError::RmError;
};

class RmValidationError : public RmError {
 public:
  using RmError::RmError;
};

struct RmEdge {
  RmStateId source;
  Guard guard;
  RmStateId target;
  double reward = 0.0;
  SourcePos pos;
};

// Result of parsing an RM document: names resolved, nothing checked beyond
// declarations.
struct RmDocument {
  std::vector<std::string> aps;
  std::vector<std::string> states;
  std::vector<std::string> terminals;
  RmStateId initial;
  std::vector<RmEdge> edges;
  // Declaration site of each state, indexed like RmStateId.
  std::vector<SourcePos> declared_at;

  [[nodiscard]] std::size_t num_states() const { return states.size(); }
  [[nodiscard]] std::size_t size() const { return states.size() + terminals.size(); }
};

RmDocument parse_rm(std::string_view text);

class RewardMachine;
RewardMachine validate_rm(RmDocument doc);

// Validated, immutable reward machine with a dense (state, assignment) table.
class RewardMachine {
 public:
  struct Outcome {
    RmStateId next;
    double reward = 0.0;
  };

  [[nodiscard]] const std::vector<std::string>& aps() const { return doc_.aps; }
  [[nodiscard]] int num_aps() const { return static_cast<int>(doc_.aps.size()); }
  [[nodiscard]] std::size_t num_assignments() const { return std::size_t{1} << doc_.aps.size(); }
  // |U|
  [[nodiscard]] std::size_t num_states() const { return doc_.states.size(); }
  // |F|
  [[nodiscard]] std::size_t num_terminals() const { return doc_.terminals.size(); }
  // |U| + |F|
  [[nodiscard]] std::size_t size() const { return doc_.size(); }
  [[nodiscard]] RmStateId initial() const { return doc_.initial; }
  [[nodiscard]] bool is_terminal(RmStateId u) const { return u.index >= doc_.states.size(); }
  [[nodiscard]] const std::string& name(RmStateId u) const;
  [[nodiscard]] std::optional<RmStateId> find_state(std::string_view name) const;
  [[nodiscard]] std::optional<int> find_ap(std::string_view name) const;
  [[nodiscard]] const std::vector<RmEdge>& edges() const { return doc_.edges; }
  // One OTHERWISE self-loop per non-terminal state, carrying the uncovered assignments.
  [[nodiscard]] const std::vector<RmEdge>& default_edges() const { return defaults_; }
  [[nodiscard]] std::span<const Outcome> table() const { return table_; }

  // delta_u and delta_r applied jointly. Throws std::invalid_argument when u is
  // terminal or sigma mentions undeclared propositions.
  [[nodiscard]] Outcome step(RmStateId u, PropSet sigma) const;

  // Builds a PropSet from proposition names; throws on unknown names.
  [[nodiscard]] PropSet props(std::initializer_list<std::string_view> names) const;
  // "{gold, home}" style rendering.
  [[nodiscard]] std::string format(PropSet sigma) const;

 private:
  friend RewardMachine validate_rm(RmDocument doc);
  RewardMachine() = default;

  RmDocument doc_;
  std::vector<RmEdge> defaults_;
  std::vector<Outcome> table_;
};

// Renders a validated machine back into the RM text format. Default self-loops
// stay implicit, rewards are written with round-trip precision.
std::string to_rm_text(const RewardMachine& rm);

// parse_rm followed by validate_rm.
RewardMachine load_rm(std::string_view text);
RewardMachine load_rm_file(const std::string& path);

}  // namespace noisy_rm
