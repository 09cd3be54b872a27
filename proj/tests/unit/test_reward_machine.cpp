#include <string>
#include <vector>

#include "doctest.h"
#include "noisy_rm/reward_machine.hpp"
#include "noisy_rm/rng.hpp"

using namespace noisy_rm;

namespace {

const std::string kDataDir = NOISY_RM_DATA_DIR;

constexpr const char* kGold = R"(rm
aps: gold home
states: u0 u1
terminals: u2
init: u0
u0 -> u1 : gold & !home , 0
u0 -> u2 : home , 0
u1 -> u2 : home , 1
)";

RmStateId id(const RewardMachine& rm, const char* name) { return rm.find_state(name).value(); }

template <typename Error>
SourcePos error_pos(const std::string& text) {
  try {
    (void)load_rm(text);
  } catch (const Error& e) {
    return e.pos();
  }
  FAIL("expected an error");
  return {};
}

std::string error_message(const std::string& text) {
  try {
    (void)load_rm(text);
  } catch (const RmError& e) {
    return e.what();
  }
  return "";
}

bool tables_equal(const RewardMachine& a, const RewardMachine& b) {
  if (a.table().size() != b.table().size()) return false;
  for (std::size_t i = 0; i < a.table().size(); ++i) {
    if (a.table()[i].next != b.table()[i].next || a.table()[i].reward != b.table()[i].reward) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("gold mining machine parses and validates") {
  const RmDocument doc = parse_rm(kGold);
  CHECK(doc.edges.size() == 3);
  CHECK(doc.size() == 3);
  const RewardMachine rm = validate_rm(doc);
  CHECK(rm.num_states() == 2);
  CHECK(rm.num_terminals() == 1);
  CHECK(rm.num_aps() == 2);
  CHECK(rm.table().size() == 2 * 4);
  CHECK(rm.is_terminal(id(rm, "u2")));
  CHECK(rm.name(rm.initial()) == "u0");
}

TEST_CASE("gold mining transitions") {
  const RewardMachine rm = load_rm(kGold);
  const auto u0 = id(rm, "u0"), u1 = id(rm, "u1"), u2 = id(rm, "u2");

  auto out = rm.step(u0, rm.props({"gold"}));
  CHECK(out.next == u1);
  CHECK(out.reward == 0.0);

  out = rm.step(u0, PropSet::empty());
  CHECK(out.next == u0);
  CHECK(out.reward == 0.0);

  out = rm.step(u1, rm.props({"home"}));
  CHECK(out.next == u2);
  CHECK(out.reward == 1.0);

  out = rm.step(u0, rm.props({"gold", "home"}));
  CHECK(out.next == u2);
  CHECK(out.reward == 0.0);

  CHECK(rm.step(u1, rm.props({"gold"})).next == u1);
}

TEST_CASE("stepping from a terminal state or with undeclared propositions is rejected") {
  const RewardMachine rm = load_rm(kGold);
  CHECK_THROWS_AS((void)rm.step(id(rm, "u2"), PropSet::empty()), std::invalid_argument);
  CHECK_THROWS_AS((void)rm.step(rm.initial(), PropSet{4}), std::invalid_argument);
  CHECK_THROWS_AS((void)rm.props({"silver"}), std::invalid_argument);
}

TEST_CASE("default self-loops cover exactly the uncovered assignments") {
  const RewardMachine rm = load_rm(kGold);
  REQUIRE(rm.default_edges().size() == 2);
  const auto& d0 = rm.default_edges()[0];
  CHECK(d0.source == id(rm, "u0"));
  CHECK(d0.target == id(rm, "u0"));
  CHECK(d0.guard.truth_table(2).count() == 1);  // only the empty assignment
  const auto& d1 = rm.default_edges()[1];
  CHECK(d1.guard.truth_table(2).count() == 2);  // {} and {gold}
}

TEST_CASE("shipped fixtures") {
  const RewardMachine gold = load_rm_file(kDataDir + "/gold.rm");
  CHECK(gold.size() == 3);
  CHECK(gold.num_aps() == 2);

  const RewardMachine traffic = load_rm_file(kDataDir + "/traffic.rm");
  CHECK(traffic.size() == 5);
  CHECK(traffic.edges().size() == 6);
  CHECK(traffic.num_aps() == 3);
  const auto out = traffic.step(id(traffic, "u1"), traffic.props({"red"}));
  CHECK(out.next == id(traffic, "u3"));
  CHECK(out.reward == 0.0);
  CHECK(traffic.step(id(traffic, "u0"), traffic.props({"package"})).reward == 1.0);
  CHECK(traffic.step(id(traffic, "u3"), traffic.props({"home"})).reward == -1.0);

  CHECK_THROWS_AS((void)load_rm_file(kDataDir + "/broken.rm"), RmValidationError);
}

TEST_CASE("nondeterminism names the state and the assignment") {
  const std::string text = std::string(kGold) + "u0 -> u1 : home , 0\n";
  const std::string msg = error_message(text);
  CHECK(msg.find("state 'u0'") != std::string::npos);
  CHECK(msg.find("on {home}") != std::string::npos);
  CHECK(error_pos<RmValidationError>(text).line == 9);
}

TEST_CASE("nondeterminism reports the first conflicting assignment") {
  const std::string msg = error_message(R"(rm
aps: a b
states: u0 u1
init: u0
u0 -> u1 : a , 1
u0 -> u0 : b , 2
)");
  CHECK(msg.find("on {a, b}") != std::string::npos);
}

TEST_CASE("validation errors") {
  SUBCASE("edge leaving a terminal") {
    const std::string msg = error_message(std::string(kGold) + "u2 -> u0 : true , 0\n");
    CHECK(msg.find("terminal") != std::string::npos);
  }
  SUBCASE("unreachable state") {
    const std::string msg = error_message(R"(rm
aps: a
states: u0 u1 lost
init: u0
u0 -> u1 : a , 0
)");
    CHECK(msg.find("'lost' is unreachable") != std::string::npos);
  }
  SUBCASE("a lone unreachable terminal parses but fails validation") {
    const std::string text = "rm\nstates: u0\nterminals: end\ninit: u0\n";
    CHECK_NOTHROW(parse_rm(text));
    CHECK(error_message(text).find("'end' is unreachable") != std::string::npos);
  }
  SUBCASE("too many propositions") {
    std::string text = "rm\naps:";
    for (int i = 0; i < 17; ++i) text += " p" + std::to_string(i);
    text += "\nstates: u0\ninit: u0\n";
    CHECK_THROWS_AS((void)load_rm(text), RmValidationError);
  }
}

TEST_CASE("sixteen propositions are accepted") {
  std::string text = "rm\naps:";
  for (int i = 0; i < 16; ++i) text += " p" + std::to_string(i);
  text += "\nstates: u0\nterminals: done\ninit: u0\nu0 -> done : p15 & p0 , 2\n";
  const RewardMachine rm = load_rm(text);
  CHECK(rm.table().size() == 65536);
  CHECK(rm.step(rm.initial(), PropSet{(1U << 15) | 1U}).reward == 2.0);
}

TEST_CASE("parse errors carry line and column") {
  SUBCASE("missing header") {
    const auto pos = error_pos<RmParseError>("aps: a\nstates: u0\ninit: u0\n");
    CHECK(pos.line == 1);
  }
  SUBCASE("undeclared proposition") {
    const std::string text = "rm\naps: a\nstates: u0 u1\ninit: u0\nu0 -> u1 : a & zz , 0\n";
    const auto pos = error_pos<RmParseError>(text);
    CHECK(pos.line == 5);
    CHECK(pos.column == 16);
    CHECK(error_message(text).find("undeclared proposition 'zz'") != std::string::npos);
  }
  SUBCASE("undeclared state") {
    const std::string text = "rm\naps: a\nstates: u0\ninit: u0\nu0 -> nowhere : a , 0\n";
    CHECK(error_pos<RmParseError>(text).line == 5);
    CHECK(error_message(text).find("undeclared state 'nowhere'") != std::string::npos);
  }
  SUBCASE("initial state not declared") {
    CHECK(error_message("rm\nstates: u0\ninit: start\n").find("'start' not declared") != std::string::npos);
  }
  SUBCASE("duplicate names") {
    CHECK(error_message("rm\naps: a a\nstates: u0\ninit: u0\n").find("duplicate proposition") != std::string::npos);
    CHECK(error_message("rm\nstates: u0 u0\ninit: u0\n").find("duplicate state") != std::string::npos);
    CHECK(error_message("rm\nstates: u0\nterminals: u0\ninit: u0\n").find("duplicate state") != std::string::npos);
  }
  SUBCASE("syntax") {
    CHECK_THROWS_AS((void)parse_rm("rm\naps: a\nstates: u0\ninit: u0\nu0 -> u0 : (a , 0\n"), RmParseError);
    CHECK_THROWS_AS((void)parse_rm("rm\naps: a\nstates: u0\ninit: u0\nu0 -> u0 : a & , 0\n"), RmParseError);
    CHECK_THROWS_AS((void)parse_rm("rm\naps: a\nstates: u0\ninit: u0\nu0 -> u0 : a\n"), RmParseError);
    CHECK_THROWS_AS((void)parse_rm("rm\naps: a\nstates: u0\ninit: u0\nu0 -> u0 : a , lots\n"), RmParseError);
    CHECK_THROWS_AS((void)parse_rm("rm\naps: true\nstates: u0\ninit: u0\n"), RmParseError);
    CHECK_THROWS_AS((void)parse_rm("rm\nstates: u0\ninit: u0\ninit: u0\n"), RmParseError);
    CHECK_THROWS_AS((void)parse_rm("rm\nstates: u0\n"), RmParseError);
    CHECK_THROWS_AS((void)parse_rm("rm\nstates: u0\nterminals: t\ninit: t\n"), RmParseError);
  }
}

TEST_CASE("comments, blank lines and header order are free") {
  const RewardMachine rm = load_rm(R"(
# leading comment
rm   # magic
init: a
states: a b   # two states

aps: x
a -> b : x , -1.5e-3
)");
  CHECK(rm.step(rm.initial(), PropSet{1}).reward == -1.5e-3);
}

TEST_CASE("serialize then parse is table-identical") {
  for (const char* file : {"/gold.rm", "/traffic.rm"}) {
    const RewardMachine rm = load_rm_file(kDataDir + file);
    const RewardMachine back = load_rm(to_rm_text(rm));
    CHECK(tables_equal(rm, back));
    CHECK(back.aps() == rm.aps());
  }
}

TEST_CASE("round-trip property over random deterministic machines") {
  Rng rng(2024);
  const std::vector<std::string> ops{" & ", " | "};
  int validated = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n_aps = 1 + static_cast<int>(rng.uniform_int(4));
    const int n_states = 1 + static_cast<int>(rng.uniform_int(4));
    const int n_terms = static_cast<int>(rng.uniform_int(3));
    std::string text = "rm\naps:";
    for (int p = 0; p < n_aps; ++p) text += " p" + std::to_string(p);
    text += "\nstates:";
    for (int u = 0; u < n_states; ++u) text += " u" + std::to_string(u);
    text += "\nterminals:";
    for (int f = 0; f < n_terms; ++f) text += " f" + std::to_string(f);
    text += "\ninit: u0\n";
    for (int u = 0; u < n_states; ++u) {
      // Later guards exclude earlier ones, so the edges are deterministic.
      std::string taken = "false";
      const int n_edges = static_cast<int>(rng.uniform_int(4));
      for (int e = 0; e < n_edges; ++e) {
        std::string g = "p" + std::to_string(rng.uniform_int(n_aps));
        if (rng.bernoulli(0.5)) g = "!" + g;
        if (rng.bernoulli(0.5)) g += ops[rng.uniform_int(2)] + "p" + std::to_string(rng.uniform_int(n_aps));
        const int target = static_cast<int>(rng.uniform_int(n_states + n_terms));
        const std::string dst =
            target < n_states ? "u" + std::to_string(target) : "f" + std::to_string(target - n_states);
        const double reward = (static_cast<double>(rng.uniform_int(2001)) - 1000.0) / 7.0;
        text += "u" + std::to_string(u) + " -> " + dst + " : (" + g + ") & !(" + taken + ") , " +
                std::to_string(reward) + "\n";
        taken += " | (" + g + ")";
      }
    }
    RmDocument doc = parse_rm(text);
    try {
      const RewardMachine rm = validate_rm(doc);
      const RewardMachine back = load_rm(to_rm_text(rm));
      REQUIRE(tables_equal(rm, back));
      ++validated;
    } catch (const RmValidationError& e) {
      // Random wiring often leaves states unreachable; nothing else may fail.
      REQUIRE(std::string(e.what()).find("unreachable") != std::string::npos);
    }
  }
  CHECK(validated > 100);
}

TEST_CASE("every validated table entry is defined and replay is deterministic") {
  const RewardMachine rm = load_rm_file(kDataDir + "/traffic.rm");
  Rng rng(3);
  for (int run = 0; run < 200; ++run) {
    std::vector<PropSet> word;
    for (int i = 0; i < 20; ++i) word.push_back(PropSet{static_cast<std::uint32_t>(rng.uniform_int(8))});
    auto replay = [&] {
      std::vector<std::pair<RmStateId, double>> trace;
      RmStateId u = rm.initial();
      for (PropSet s : word) {
        if (rm.is_terminal(u)) break;
        const auto out = rm.step(u, s);
        REQUIRE(out.next.index < rm.size());
        trace.emplace_back(out.next, out.reward);
        u = out.next;
      }
      return trace;
    };
    CHECK(replay() == replay());
  }
}

TEST_CASE("format renders assignments by name") {
  const RewardMachine rm = load_rm(kGold);
  CHECK(rm.format(PropSet::empty()) == "{}");
  CHECK(rm.format(rm.props({"home", "gold"})) == "{gold, home}");
}
